#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "leafret/config.hpp"
#include "leafret/imaging.hpp"

namespace leafret {

struct FeatureLayout {
    std::size_t shape = 24;
    std::size_t color = 9;
    std::size_t vein = 4;

    std::size_t dims() const noexcept { return shape + color + vein; }
    static FeatureLayout for_config(const PipelineConfig& cfg);
    friend bool operator==(const FeatureLayout&, const FeatureLayout&) = default;
};

// Concatenated [shape | color | vein] features.
struct FeatureVector {
    FeatureLayout layout;
    std::vector<double> values;

    std::span<const double> shape() const { return {values.data(), layout.shape}; }
    std::span<const double> color() const { return {values.data() + layout.shape, layout.color}; }
    std::span<const double> vein() const {
        return {values.data() + layout.shape + layout.color, layout.vein};
    }
    friend bool operator==(const FeatureVector&, const FeatureVector&) = default;
};

FeatureVector extract_features(const RasterImage& img, const PipelineConfig& cfg);

// Loads and extracts; failures are rethrown as PipelineError with the same
// stage and the path prepended to the message.
FeatureVector extract_features_from_file(const std::filesystem::path& path,
                                         const PipelineConfig& cfg);

struct CorpusEntry {
    std::string species;
    std::string path;  // relative to the corpus root, '/'-separated
    friend bool operator==(const CorpusEntry&, const CorpusEntry&) = default;
};

bool is_image_file(const std::filesystem::path& p);

// Lists root/<species>/<image>, species and files sorted. Throws CorpusError.
std::vector<CorpusEntry> ingest_dataset(const std::filesystem::path& root);

struct DatasetSplit {
    std::vector<CorpusEntry> reference;
    std::vector<CorpusEntry> test;
    std::vector<std::string> warnings;
};

// Per-species seeded shuffle; the first n_ref go to reference, the next
// n_test to test. Throws CorpusError for short species unless permissive.
DatasetSplit split_dataset(const std::vector<CorpusEntry>& listing, const SplitConfig& cfg);

struct IndexRecord {
    std::int64_t id = 0;
    std::string species;
    std::string path;
    FeatureVector features;
    friend bool operator==(const IndexRecord&, const IndexRecord&) = default;
};

struct NormalizationStats {
    std::vector<double> min;
    std::vector<double> max;
    friend bool operator==(const NormalizationStats&, const NormalizationStats&) = default;
};

struct Index {
    std::vector<IndexRecord> records;
    NormalizationStats stats;
    PipelineConfig config;

    FeatureLayout layout() const { return FeatureLayout::for_config(config); }
};

bool operator==(const Index& a, const Index& b);

NormalizationStats compute_stats(const std::vector<IndexRecord>& records);

// Min-max scaling into [0, 1], clamped; constant dimensions map to 0.
FeatureVector normalize_vector(const FeatureVector& v, const NormalizationStats& stats);

struct ExtractionFailure {
    std::string path;
    std::string stage;
    std::string message;
};

struct ExtractionResult {
    CorpusEntry entry;
    bool ok = false;
    FeatureVector features;
    ExtractionFailure failure;
};

// Extracts features for every entry, in parallel over `jobs` threads; the
// result order matches `entries` regardless of jobs.
std::vector<ExtractionResult> extract_all(const std::filesystem::path& root,
                                          const std::vector<CorpusEntry>& entries,
                                          const PipelineConfig& cfg, unsigned jobs);

struct BuildResult {
    Index index;
    std::vector<ExtractionFailure> failures;
};

// Builds from already-extracted results (failures collected, not fatal).
// Records are sorted by (species, path) and numbered from 1.
BuildResult assemble_index(const std::vector<ExtractionResult>& extracted, const PipelineConfig& cfg);

BuildResult build_index(const std::filesystem::path& root, const std::vector<CorpusEntry>& entries,
                        const PipelineConfig& cfg, unsigned jobs);

void write_index(const Index& index, std::ostream& out);
Index read_index(std::istream& in);
void save_index(const Index& index, const std::filesystem::path& path);
Index load_index(const std::filesystem::path& path);

}  // namespace leafret
