#include "tfr/models/train.hpp"

#include <cmath>
#include <fstream>
#include <functional>
#include <numeric>
#include <ostream>

#include "tfr/models/losses.hpp"
#include "tfr/rng.hpp"

namespace tfr {

void TrainConfig::validate() const {
    if (epochs < 1 || batch_size < 1) throw TrainError("train config: epochs and batch size must be positive");
    if (lr <= 0 || lr_final <= 0) throw TrainError("train config: learning rates must be positive");
    if (lambda_reg < 0) throw TrainError("train config: lambda_reg must be nonnegative");
}

void write_loss_csv(const std::string& path, const std::vector<EpochStats>& history) {
    std::ofstream out(path);
    if (!out) throw TrainError("cannot write loss history: " + path);
    out << "epoch,train_loss,field_component,grad_component,val_mae\n";
    for (const auto& e : history)
        out << e.epoch << "," << e.train_loss << "," << e.field_component << ","
            << e.grad_component << "," << e.val_mae << "\n";
    if (!out.flush()) throw TrainError("failed writing loss history: " + path);
}

TensorData load_tensor_data(const std::string& dataset_path, const ObservationPlan& plan,
                            const PatchSpec& patch, const FieldNorm& norm, std::uint64_t begin,
                            std::uint64_t end) {
    DatasetReader reader(dataset_path);
    const auto& h = reader.header();
    end = std::min(end, h.n_samples);
    if (begin >= end) throw TrainError("load_tensor_data: empty sample range");
    const int n = static_cast<int>(h.grid_n);
    plan.validate(n);
    patch.validate(n);
    const std::int64_t count = static_cast<std::int64_t>(end - begin);

    TensorData data;
    data.grid_n = n;
    data.norm_scale = norm.scale;
    data.sparse = torch::zeros({count, 1, n, n}, torch::kFloat32);
    data.truth = torch::empty({count, 1, n, n}, torch::kFloat32);
    data.obs = torch::empty({count, plan.m()}, torch::kFloat32);
    data.patch = torch::empty({count, patch.p()}, torch::kFloat32);

    reader.skip(begin);
    Sample sample;
    for (std::int64_t i = 0; i < count; ++i) {
        if (!reader.next(sample)) throw TrainError("load_tensor_data: dataset ended early");
        float* truth_dst = data.truth[i][0].data_ptr<float>();
        for (std::size_t c = 0; c < sample.field.a.size(); ++c)
            truth_dst[c] = static_cast<float>(norm.normalize(sample.field.a[c]));
        float* sparse_dst = data.sparse[i][0].data_ptr<float>();
        float* obs_dst = data.obs[i].data_ptr<float>();
        for (int s = 0; s < plan.m(); ++s) {
            const auto& pt = plan.points[s];
            const float v = truth_dst[static_cast<std::size_t>(pt.row) * n + pt.col];
            sparse_dst[static_cast<std::size_t>(pt.row) * n + pt.col] = v;
            obs_dst[s] = v;
        }
        float* patch_dst = data.patch[i].data_ptr<float>();
        for (int c = 0; c < patch.p(); ++c) {
            const auto& pt = patch.cells[c];
            patch_dst[c] = truth_dst[static_cast<std::size_t>(pt.row) * n + pt.col];
        }
    }
    return data;
}

namespace {

const double kPi = std::acos(-1.0);

double cosine_lr(const TrainConfig& cfg, int epoch) {
    if (cfg.epochs <= 1) return cfg.lr;
    const double t = static_cast<double>(epoch) / (cfg.epochs - 1);
    return cfg.lr_final + 0.5 * (cfg.lr - cfg.lr_final) * (1.0 + std::cos(kPi * t));
}

std::vector<std::int64_t> epoch_permutation(std::int64_t n, std::uint64_t seed, int epoch) {
    std::vector<std::int64_t> perm(n);
    std::iota(perm.begin(), perm.end(), 0);
    RngStream rng(seed ^ (0xa5a5a5a5ULL + static_cast<std::uint64_t>(epoch) * 0x100000001b3ULL));
    for (std::int64_t i = n - 1; i > 0; --i) {
        const auto j = static_cast<std::int64_t>(rng.next_below(static_cast<std::uint64_t>(i + 1)));
        std::swap(perm[i], perm[j]);
    }
    return perm;
}

struct BatchLoss {
    torch::Tensor loss;
    double field = 0.0;
    double grad = 0.0;
};

/// Shared Adam/cosine epoch loop; forward() returns the batch loss and
/// val_mae() scores the held-out split in kelvin.
std::vector<EpochStats> run_epochs(
    std::vector<torch::Tensor> params, const TrainConfig& cfg, std::int64_t n_train,
    const std::function<BatchLoss(const torch::Tensor&)>& forward,
    const std::function<double()>& val_mae, std::ostream* progress) {
    torch::optim::Adam opt(params, torch::optim::AdamOptions(cfg.lr));
    std::vector<EpochStats> history;
    history.reserve(cfg.epochs);
    for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
        const double lr = cosine_lr(cfg, epoch);
        for (auto& group : opt.param_groups())
            static_cast<torch::optim::AdamOptions&>(group.options()).lr(lr);

        const auto perm = epoch_permutation(n_train, cfg.seed, epoch);
        double loss_sum = 0.0, field_sum = 0.0, grad_sum = 0.0;
        std::int64_t batches = 0;
        for (std::int64_t at = 0; at < n_train; at += cfg.batch_size) {
            const auto len = std::min<std::int64_t>(cfg.batch_size, n_train - at);
            auto idx = torch::empty({len}, torch::kInt64);
            std::copy(perm.begin() + at, perm.begin() + at + len, idx.data_ptr<std::int64_t>());
            opt.zero_grad();
            BatchLoss out = forward(idx);
            const double value = out.loss.item<double>();
            if (!std::isfinite(value))
                throw TrainError("training diverged (non-finite loss) at epoch " +
                                 std::to_string(epoch));
            out.loss.backward();
            opt.step();
            loss_sum += value;
            field_sum += out.field;
            grad_sum += out.grad;
            ++batches;
        }
        EpochStats stats;
        stats.epoch = epoch;
        stats.train_loss = loss_sum / static_cast<double>(batches);
        stats.field_component = field_sum / static_cast<double>(batches);
        stats.grad_component = grad_sum / static_cast<double>(batches);
        stats.val_mae = val_mae();
        history.push_back(stats);
        if (progress)
            (*progress) << "epoch " << epoch + 1 << "/" << cfg.epochs << "  lr " << lr
                        << "  train_loss " << stats.train_loss << "  val_mae " << stats.val_mae
                        << " K\n"
                        << std::flush;
    }
    return history;
}

template <typename Net>
double batched_val_mae(Net& net, const torch::Tensor& in, const torch::Tensor& target,
                       double scale) {
    torch::NoGradGuard no_grad;
    net->eval();
    double err_sum = 0.0;
    std::int64_t count = 0;
    const std::int64_t n = in.size(0);
    const std::int64_t chunk = 64;
    for (std::int64_t at = 0; at < n; at += chunk) {
        const auto len = std::min(chunk, n - at);
        auto pred = net->forward(in.slice(0, at, at + len));
        err_sum += (pred - target.slice(0, at, at + len)).abs().sum().template item<double>();
        count += target.slice(0, at, at + len).numel();
    }
    net->train();
    return scale * err_sum / static_cast<double>(count);
}

}  // namespace

std::pair<AdaptiveUNet, std::vector<EpochStats>> train_unet(const UNetConfig& ucfg,
                                                            const TrainConfig& tcfg,
                                                            const TensorData& train,
                                                            const TensorData& val,
                                                            std::ostream* progress) {
    tcfg.validate();
    ucfg.validate();
    torch::manual_seed(tcfg.seed);
    AdaptiveUNet net(ucfg);
    net->train();
    auto forward = [&](const torch::Tensor& idx) {
        auto x = train.sparse.index_select(0, idx);
        auto y = train.truth.index_select(0, idx);
        auto pred = net->forward(x);
        auto f = field_loss(pred, y);
        auto g = gradient_loss(pred, y);
        BatchLoss out;
        out.loss = f + tcfg.lambda_reg * g;
        out.field = f.item<double>();
        out.grad = g.item<double>();
        return out;
    };
    auto vmae = [&]() { return batched_val_mae(net, val.sparse, val.truth, val.norm_scale); };
    auto history = run_epochs(net->parameters(), tcfg, train.count(), forward, vmae, progress);
    return {net, std::move(history)};
}

std::pair<PatchMLP, std::vector<EpochStats>> train_patch_mlp(const MLPConfig& mcfg,
                                                             const TrainConfig& tcfg,
                                                             const TensorData& train,
                                                             const TensorData& val,
                                                             std::ostream* progress) {
    tcfg.validate();
    mcfg.validate();
    if (mcfg.input != static_cast<int>(train.obs.size(1)))
        throw TrainError("train_patch_mlp: plan m does not match the configured input width");
    if (mcfg.output != static_cast<int>(train.patch.size(1)))
        throw TrainError("train_patch_mlp: patch width does not match the configured output width");
    torch::manual_seed(tcfg.seed);
    PatchMLP net(mcfg);
    net->train();
    auto forward = [&](const torch::Tensor& idx) {
        auto pred = net->forward(train.obs.index_select(0, idx));
        BatchLoss out;
        out.loss = patch_loss(pred, train.patch.index_select(0, idx));
        out.field = out.loss.item<double>();
        return out;
    };
    auto vmae = [&]() { return batched_val_mae(net, val.obs, val.patch, val.norm_scale); };
    auto history = run_epochs(net->parameters(), tcfg, train.count(), forward, vmae, progress);
    return {net, std::move(history)};
}

std::pair<NNBaseline, std::vector<EpochStats>> train_nn_baseline(const NNBaselineConfig& bcfg,
                                                                 const TrainConfig& tcfg,
                                                                 const TensorData& train,
                                                                 const TensorData& val,
                                                                 std::ostream* progress) {
    tcfg.validate();
    bcfg.validate();
    if (bcfg.out_n != train.grid_n)
        throw TrainError("train_nn_baseline: output size does not match the dataset grid");
    torch::manual_seed(tcfg.seed);
    NNBaseline net(bcfg);
    net->train();
    auto forward = [&](const torch::Tensor& idx) {
        auto pred = net->forward(train.obs.index_select(0, idx));
        BatchLoss out;
        out.loss = field_loss(pred, train.truth.index_select(0, idx));
        out.field = out.loss.item<double>();
        return out;
    };
    auto vmae = [&]() { return batched_val_mae(net, val.obs, val.truth, val.norm_scale); };
    auto history = run_epochs(net->parameters(), tcfg, train.count(), forward, vmae, progress);
    return {net, std::move(history)};
}

}  // namespace tfr
