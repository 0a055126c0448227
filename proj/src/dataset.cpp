#include "tfr/dataset.hpp"

#include <bit>
#include <cstring>
#include <filesystem>
#include <thread>

#include "tfr/thermal.hpp"

static_assert(std::endian::native == std::endian::little,
              "TFR1 container assumes a little-endian host");

namespace tfr {

namespace {

constexpr char kMagic[4] = {'T', 'F', 'R', '1'};
constexpr std::size_t kHashLen = 64;

template <typename T>
void write_pod(std::ofstream& out, const T& v) {
    out.write(reinterpret_cast<const char*>(&v), sizeof(T));
}

template <typename T>
T read_pod(std::ifstream& in) {
    T v{};
    in.read(reinterpret_cast<char*>(&v), sizeof(T));
    return v;
}

void write_header(std::ofstream& out, const DatasetHeader& h) {
    out.write(kMagic, 4);
    write_pod(out, h.version);
    write_pod(out, h.grid_n);
    write_pod(out, h.n_sources);
    write_pod(out, h.n_samples);
    write_pod(out, h.rng_seed);
    write_pod(out, static_cast<std::uint8_t>(h.kind));
    if (h.layout_hash.size() != kHashLen)
        throw DatasetError("dataset: layout hash must be 64 bytes");
    out.write(h.layout_hash.data(), kHashLen);
}

std::size_t header_bytes() { return 4 + 4 + 4 + 4 + 8 + 8 + 1 + kHashLen; }

void append_sample(std::string& buf, const Sample& s) {
    for (double p : s.powers) {
        const float f = static_cast<float>(p);
        buf.append(reinterpret_cast<const char*>(&f), sizeof(float));
    }
    for (double v : s.field.a) {
        const float f = static_cast<float>(v);
        buf.append(reinterpret_cast<const char*>(&f), sizeof(float));
    }
}

/// Computes samples [begin, end) into `slot` via deterministic substreams.
void fill_block(const Layout& layout, const SteadySolver& solver, std::uint64_t seed,
                std::uint64_t begin, std::uint64_t end, bool special, std::vector<Sample>& slot,
                int threads) {
    const std::uint64_t count = end - begin;
    slot.resize(count);
    auto work = [&](std::uint64_t lo, std::uint64_t hi) {
        for (std::uint64_t i = lo; i < hi; ++i) {
            const std::uint64_t index = begin + i;
            std::vector<double> powers;
            if (special) {
                powers.resize(layout.n_sources());
                for (int s = 0; s < layout.n_sources(); ++s)
                    powers[s] = (index >> s) & 1ULL ? layout.sources[s].phi_max : 0.0;
            } else {
                RngStream rng = RngStream::substream(seed, index);
                powers = sample_powers(layout, rng);
            }
            slot[i].field = solver.solve(powers);
            slot[i].powers = std::move(powers);
        }
    };
    if (threads <= 1 || count < 2) {
        work(0, count);
        return;
    }
    const int nt = std::min<std::uint64_t>(threads, count);
    std::vector<std::thread> pool;
    for (int t = 0; t < nt; ++t) {
        const std::uint64_t lo = count * t / nt;
        const std::uint64_t hi = count * (t + 1) / nt;
        pool.emplace_back(work, lo, hi);
    }
    for (auto& th : pool) th.join();
}

void generate_impl(const Layout& layout, std::uint64_t n_samples, std::uint64_t seed,
                   const std::string& path, DatasetKind kind, int threads,
                   const ProgressFn& progress) {
    layout.validate();
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw DatasetError("dataset: cannot open for writing: " + path);

    DatasetHeader h;
    h.grid_n = static_cast<std::uint32_t>(layout.grid_n);
    h.n_sources = static_cast<std::uint32_t>(layout.n_sources());
    h.n_samples = n_samples;
    h.rng_seed = seed;
    h.kind = kind;
    h.layout_hash = layout.hash();
    write_header(out, h);

    SteadySolver solver(layout);
    const std::uint64_t block = 64;
    std::vector<Sample> slot;
    std::string buf;
    for (std::uint64_t begin = 0; begin < n_samples; begin += block) {
        const std::uint64_t end = std::min(n_samples, begin + block);
        fill_block(layout, solver, seed, begin, end, kind == DatasetKind::special, slot, threads);
        buf.clear();
        for (const auto& s : slot) append_sample(buf, s);
        out.write(buf.data(), static_cast<std::streamsize>(buf.size()));
        if (!out) throw DatasetError("dataset: write failed at sample " + std::to_string(end));
        if (progress) progress(end, n_samples);
    }
    out.flush();
    if (!out) throw DatasetError("dataset: flush failed for " + path);
}

}  // namespace

std::vector<double> sample_powers(const Layout& layout, RngStream& rng) {
    std::vector<double> powers(layout.n_sources());
    for (int i = 0; i < layout.n_sources(); ++i)
        powers[i] = rng.next_double() * layout.sources[i].phi_max;
    return powers;
}

void generate_dataset(const Layout& layout, std::uint64_t n_samples, std::uint64_t seed,
                      const std::string& path, int threads, const ProgressFn& progress) {
    if (n_samples < 1) throw DatasetError("dataset: n_samples must be at least 1");
    generate_impl(layout, n_samples, seed, path, DatasetKind::general, threads, progress);
}

void generate_special_set(const Layout& layout, const std::string& path, int threads,
                          const ProgressFn& progress) {
    const int n = layout.n_sources();
    if (n > 16)
        throw DatasetError("special set: 2^" + std::to_string(n) +
                           " samples would be generated; refusing for n_sources > 16");
    generate_impl(layout, 1ULL << n, 0, path, DatasetKind::special, threads, progress);
}

DatasetReader::DatasetReader(const std::string& path)
    : in_(path, std::ios::binary), path_(path) {
    if (!in_) throw DatasetError("dataset: cannot open " + path);
    char magic[4];
    in_.read(magic, 4);
    if (!in_ || std::memcmp(magic, kMagic, 4) != 0)
        throw DatasetError("dataset: bad magic in " + path + " (not a TFR1 file)");
    header_.version = read_pod<std::uint32_t>(in_);
    if (header_.version != 1)
        throw DatasetError("dataset: unsupported format version " + std::to_string(header_.version));
    header_.grid_n = read_pod<std::uint32_t>(in_);
    header_.n_sources = read_pod<std::uint32_t>(in_);
    header_.n_samples = read_pod<std::uint64_t>(in_);
    header_.rng_seed = read_pod<std::uint64_t>(in_);
    header_.kind = static_cast<DatasetKind>(read_pod<std::uint8_t>(in_));
    header_.layout_hash.resize(kHashLen);
    in_.read(header_.layout_hash.data(), kHashLen);
    if (!in_) throw DatasetError("dataset: truncated header in " + path);
    payload_begin_ = in_.tellg();

    const auto actual = std::filesystem::file_size(path);
    const auto expected = header_bytes() + header_.n_samples * header_.sample_bytes();
    if (actual != expected)
        throw DatasetError("dataset: truncated payload in " + path + " (expected " +
                           std::to_string(expected) + " bytes, file has " + std::to_string(actual) +
                           ")");
}

bool DatasetReader::matches_layout(const Layout& layout) const {
    return header_.layout_hash == layout.hash();
}

bool DatasetReader::next(Sample& out) {
    if (position_ >= header_.n_samples) return false;
    out.powers.resize(header_.n_sources);
    out.field = Grid(static_cast<int>(header_.grid_n));
    std::vector<float> buf(header_.n_sources + static_cast<std::size_t>(header_.grid_n) * header_.grid_n);
    in_.read(reinterpret_cast<char*>(buf.data()),
             static_cast<std::streamsize>(buf.size() * sizeof(float)));
    if (!in_) throw DatasetError("dataset: read failed at sample " + std::to_string(position_));
    for (std::uint32_t i = 0; i < header_.n_sources; ++i) out.powers[i] = buf[i];
    for (std::size_t i = 0; i < out.field.a.size(); ++i)
        out.field.a[i] = buf[header_.n_sources + i];
    ++position_;
    return true;
}

void DatasetReader::skip(std::uint64_t count) {
    count = std::min(count, header_.n_samples - position_);
    in_.seekg(static_cast<std::streamoff>(count * header_.sample_bytes()), std::ios::cur);
    position_ += count;
}

void DatasetReader::rewind() {
    in_.clear();
    in_.seekg(payload_begin_);
    position_ = 0;
}

}  // namespace tfr
