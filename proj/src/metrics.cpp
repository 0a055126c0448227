#include "tfr/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "tfr/sha256.hpp"

namespace tfr {

SampleMetrics compute_metrics(const Grid& pred, const Grid& truth,
                              const std::vector<std::uint8_t>& mask) {
    require_same_shape(pred, truth);
    if (mask.size() != pred.a.size())
        throw MetricsError("compute_metrics: mask size does not match the field");
    std::size_t mask_count = 0;
    double sum = 0.0, masked_sum = 0.0, max_err = 0.0;
    for (std::size_t i = 0; i < pred.a.size(); ++i) {
        const double e = std::abs(pred.a[i] - truth.a[i]);
        sum += e;
        max_err = std::max(max_err, e);
        if (mask[i]) {
            masked_sum += e;
            ++mask_count;
        }
    }
    if (mask_count == 0)
        throw MetricsError("compute_metrics: component mask is empty, CMAE undefined");
    SampleMetrics m;
    m.mae = sum / static_cast<double>(pred.a.size());
    m.cmae = masked_sum / static_cast<double>(mask_count);
    m.maxae = max_err;
    m.mtae = std::abs(pred.max() - truth.max());
    return m;
}

MetricsAggregate MetricsReport::aggregate() const {
    MetricsAggregate agg;
    agg.count = rows.size();
    for (const auto& r : rows) {
        agg.mae += r.mae;
        agg.cmae += r.cmae;
        agg.maxae_mean += r.maxae;
        agg.maxae_set = std::max(agg.maxae_set, r.maxae);
        agg.mtae += r.mtae;
    }
    if (!rows.empty()) {
        const double n = static_cast<double>(rows.size());
        agg.mae /= n;
        agg.cmae /= n;
        agg.maxae_mean /= n;
        agg.mtae /= n;
    }
    return agg;
}

namespace {
std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.9g", v);
    return buf;
}
}  // namespace

void MetricsReport::write_csv(const std::string& path) const {
    std::ofstream out(path);
    if (!out) throw MetricsError("cannot write report: " + path);
    for (const auto& [k, v] : metadata) out << "# " << k << " = " << v << "\n";
    out << "index,mae,cmae,maxae,mtae\n";
    for (const auto& r : rows)
        out << r.index << "," << fmt(r.mae) << "," << fmt(r.cmae) << "," << fmt(r.maxae) << ","
            << fmt(r.mtae) << "\n";
    const auto agg = aggregate();
    out << "mean," << fmt(agg.mae) << "," << fmt(agg.cmae) << "," << fmt(agg.maxae_mean) << ","
        << fmt(agg.mtae) << "\n";
    out << "set_max,,," << fmt(agg.maxae_set) << ",\n";
    if (!out.flush()) throw MetricsError("failed writing report: " + path);
}

void MetricsReport::write_json(const std::string& path) const {
    const auto agg = aggregate();
    nlohmann::json j;
    j["metadata"] = metadata;
    j["n_samples"] = agg.count;
    j["aggregate"] = {{"mae", agg.mae},
                      {"cmae", agg.cmae},
                      {"maxae_mean", agg.maxae_mean},
                      {"maxae_set", agg.maxae_set},
                      {"mtae", agg.mtae}};
    std::ofstream out(path);
    if (!out) throw MetricsError("cannot write report: " + path);
    out << j.dump(2) << "\n";
    if (!out.flush()) throw MetricsError("failed writing report: " + path);
}

ParsedReport parse_report_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw MetricsError("cannot read report: " + path);
    ParsedReport rep;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        if (line[0] == '#') {
            const auto eq = line.find('=');
            if (eq != std::string::npos) {
                std::string key = line.substr(2, eq - 3);
                std::string val = line.substr(eq + 2);
                rep.metadata[key] = val;
            }
            continue;
        }
        std::istringstream ss(line);
        std::string first;
        std::getline(ss, first, ',');
        if (first == "index") continue;
        std::vector<std::string> cells;
        std::string cell;
        while (std::getline(ss, cell, ',')) cells.push_back(cell);
        if (first == "mean" && cells.size() >= 4) {
            rep.aggregate.mae = std::stod(cells[0]);
            rep.aggregate.cmae = std::stod(cells[1]);
            rep.aggregate.maxae_mean = std::stod(cells[2]);
            rep.aggregate.mtae = std::stod(cells[3]);
        } else if (first == "set_max" && cells.size() >= 3) {
            rep.aggregate.maxae_set = std::stod(cells[2]);
        } else {
            ++rep.n_rows;
        }
    }
    rep.aggregate.count = rep.n_rows;
    return rep;
}

MetricsReport evaluate(DatasetReader& reader, const ObservationPlan& plan, const Layout& layout,
                       const FieldReconstructor& reconstruct, EvalSplit split,
                       std::map<std::string, std::string> metadata) {
    if (!reader.matches_layout(layout))
        throw MetricsError("evaluate: dataset was generated under a different layout");
    if (!plan.layout_hash.empty() && plan.layout_hash != layout.hash())
        throw MetricsError("evaluate: observation plan was built under a different layout");

    const auto mask = component_mask(layout);
    const std::uint64_t n = reader.header().n_samples;
    const std::uint64_t split_at = train_count(n);
    std::uint64_t begin = 0, end = n;
    if (split == EvalSplit::train) end = split_at;
    if (split == EvalSplit::test) begin = split_at;

    reader.rewind();
    reader.skip(begin);
    MetricsReport report;
    report.metadata = std::move(metadata);
    report.metadata["dataset_layout_hash"] = reader.header().layout_hash;
    report.metadata["plan_m"] = std::to_string(plan.m());
    report.metadata["split"] =
        split == EvalSplit::test ? "test" : (split == EvalSplit::train ? "train" : "all");
    report.metadata["mask_hash"] = sha256_hex(
        std::string_view(reinterpret_cast<const char*>(mask.data()), mask.size()));

    Sample sample;
    for (std::uint64_t i = begin; i < end && reader.next(sample); ++i) {
        const auto obs = extract_observations(sample.field, plan, reader.header().layout_hash);
        Grid pred = reconstruct(obs, sample);
        SampleMetrics m = compute_metrics(pred, sample.field, mask);
        m.index = i;
        report.rows.push_back(m);
    }
    return report;
}

}  // namespace tfr
