#pragma once

#include <cstdint>
#include <fstream>
#include <functional>
#include <string>
#include <vector>

#include "tfr/field.hpp"
#include "tfr/layout.hpp"
#include "tfr/rng.hpp"

namespace tfr {

struct DatasetError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

enum class DatasetKind : std::uint8_t { general = 0, special = 1 };

/// One (power vector, ground-truth field) pair.
struct Sample {
    std::vector<double> powers;  // W/m^2, one per source
    Grid field;                  // kelvin
};

/// Fixed-width binary header of the TFR1 container. All integers little-endian.
struct DatasetHeader {
    std::uint32_t version = 1;
    std::uint32_t grid_n = 0;
    std::uint32_t n_sources = 0;
    std::uint64_t n_samples = 0;
    std::uint64_t rng_seed = 0;
    DatasetKind kind = DatasetKind::general;
    std::string layout_hash;  // 64 hex chars

    std::size_t sample_bytes() const {
        return sizeof(float) * (n_sources + static_cast<std::size_t>(grid_n) * grid_n);
    }
};

/// Independent uniform draw on [0, phi_max] per source.
std::vector<double> sample_powers(const Layout& layout, RngStream& rng);

using ProgressFn = std::function<void(std::uint64_t done, std::uint64_t total)>;

/// Generate n samples under deterministic per-sample RNG substreams and write
/// them to `path`. Parallel runs produce files byte-identical to serial ones.
void generate_dataset(const Layout& layout, std::uint64_t n_samples, std::uint64_t seed,
                      const std::string& path, int threads = 1, const ProgressFn& progress = {});

/// All 2^n binary power assignments (phi in {0, phi_max}), enumerated in
/// binary-counting order with source 0 as the least significant bit.
void generate_special_set(const Layout& layout, const std::string& path, int threads = 1,
                          const ProgressFn& progress = {});

/// Streaming reader; validates magic, version and payload size up front.
class DatasetReader {
public:
    explicit DatasetReader(const std::string& path);

    const DatasetHeader& header() const { return header_; }
    bool matches_layout(const Layout& layout) const;

    /// Reads the next sample; returns false once all samples are consumed.
    bool next(Sample& out);

    /// Skips `count` samples without decoding them.
    void skip(std::uint64_t count);

    /// Index of the next sample next() would return.
    std::uint64_t position() const { return position_; }

    void rewind();

private:
    std::ifstream in_;
    std::string path_;
    DatasetHeader header_;
    std::uint64_t position_ = 0;
    std::streampos payload_begin_;
};

/// Deterministic 80/20 split boundary: samples [0, n_train) train, rest test.
inline std::uint64_t train_count(std::uint64_t n_samples, double train_frac = 0.8) {
    return static_cast<std::uint64_t>(train_frac * static_cast<double>(n_samples));
}

}  // namespace tfr
