#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include "tfr/dataset.hpp"
#include "tfr/field.hpp"
#include "tfr/observe.hpp"

namespace tfr {

struct MetricsError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// The four per-sample reconstruction metrics, all in kelvin.
struct SampleMetrics {
    std::uint64_t index = 0;
    double mae = 0.0;    // mean absolute error over the grid
    double cmae = 0.0;   // mean absolute error over component-covered nodes
    double maxae = 0.0;  // worst cellwise absolute error
    double mtae = 0.0;   // |max(pred) - max(truth)|
};

struct MetricsAggregate {
    std::uint64_t count = 0;
    double mae = 0.0;
    double cmae = 0.0;
    double maxae_mean = 0.0;  // mean of per-sample maxima
    double maxae_set = 0.0;   // max over samples (the other reading of "MaxAE")
    double mtae = 0.0;
};

struct MetricsReport {
    std::vector<SampleMetrics> rows;
    std::map<std::string, std::string> metadata;

    MetricsAggregate aggregate() const;
    void write_csv(const std::string& path) const;
    void write_json(const std::string& path) const;
};

/// Aggregate-only view parsed back from a report CSV (for comparisons).
struct ParsedReport {
    MetricsAggregate aggregate;
    std::map<std::string, std::string> metadata;
    std::size_t n_rows = 0;
};
ParsedReport parse_report_csv(const std::string& path);

/// mask[j*n+k] true on component-covered nodes; must be nonempty for CMAE.
SampleMetrics compute_metrics(const Grid& pred, const Grid& truth,
                              const std::vector<std::uint8_t>& mask);

enum class EvalSplit { train, test, all };

/// Reconstruction callback: most reconstructors use only the observations;
/// test oracles may inspect the full sample.
using FieldReconstructor = std::function<Grid(const ObservationSet&, const Sample&)>;

/// Runs the reconstructor over one split of a dataset and aggregates metrics.
/// Deterministic: samples are visited in storage order.
MetricsReport evaluate(DatasetReader& reader, const ObservationPlan& plan, const Layout& layout,
                       const FieldReconstructor& reconstruct, EvalSplit split = EvalSplit::test,
                       std::map<std::string, std::string> metadata = {});

}  // namespace tfr
