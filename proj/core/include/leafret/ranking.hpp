#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "leafret/config.hpp"
#include "leafret/retrieval_index.hpp"

namespace leafret {

double group_distance(std::span<const double> q, std::span<const double> t);

// Weighted mean of the shape, color and vein group distances. Both vectors
// must be normalized against the same stats.
double combined_distance(const FeatureVector& q, const FeatureVector& t, const Weights& w);

struct RankedEntry {
    int rank = 0;
    std::int64_t record_id = 0;
    std::string species;
    std::string path;
    double distance = 0.0;
};

struct RankedResult {
    std::vector<RankedEntry> entries;
};

// Every record, ascending distance, ties by record id. `q` is normalized.
RankedResult rank_records(const Index& index, const FeatureVector& q, const Weights& w);

// The n closest records.
RankedResult query_top_n(const Index& index, const FeatureVector& q, int n, const Weights& w);

// The n closest distinct species, each represented by its best record.
RankedResult top_species(const Index& index, const FeatureVector& q, int n, const Weights& w);

// Collapses a record ranking to first occurrences of each species.
RankedResult collapse_species(const RankedResult& records, int n);

struct LabeledQuery {
    std::string species;
    std::string path;
    FeatureVector features;  // raw, normalized inside evaluate()
};

struct SpeciesRow {
    std::string species;
    std::int64_t queries = 0;
    std::vector<std::int64_t> hits;  // one per n in EvaluationReport::ns
};

struct EvaluationReport {
    std::vector<int> ns;
    std::vector<SpeciesRow> rows;  // sorted by species
    std::int64_t queries = 0;
    std::vector<std::int64_t> relevant;  // one per n
    std::vector<ExtractionFailure> failures;

    double accuracy(std::size_t k) const;
};

// A query is relevant at n when its species is among the top-n distinct
// species.
EvaluationReport evaluate(const Index& index, const std::vector<LabeledQuery>& tests,
                          const std::vector<int>& ns, const Weights& w);

// 100 * relevant / total rounded half-up to two decimals, e.g. "93.13".
std::string format_percent(std::int64_t relevant, std::int64_t total);

void write_report_text(const EvaluationReport& report, const PipelineConfig& cfg, std::ostream& out);

// `<species> <top-n1> <top-n2> ...` per species, then `AGGREGATE ...`.
void write_report_machine(const EvaluationReport& report, std::ostream& out);

}  // namespace leafret
