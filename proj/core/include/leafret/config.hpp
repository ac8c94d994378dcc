#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "leafret/appearance.hpp"
#include "leafret/segmentation.hpp"
#include "leafret/shape_descriptor.hpp"

namespace leafret {

struct Weights {
    double ws = 0.55;
    double wc = 0.25;
    double wv = 0.20;

    double sum() const noexcept { return ws + wc + wv; }
    void validate() const;
};

struct SplitConfig {
    int n_ref = 40;
    int n_test = 10;
    std::uint64_t seed = 1;
    bool permissive = false;

    void validate() const;
};

// Everything that influences extraction, ranking, and the dataset split.
// Serialized as flat `key=value` pairs shared by the index header, report
// headers and config files.
struct PipelineConfig {
    SegmentationConfig seg;
    PftConfig pft;
    VeinConfig vein;
    Weights weights;
    SplitConfig split;

    void validate() const;
};

using ConfigPairs = std::vector<std::pair<std::string, std::string>>;

// Keys in a fixed order: pft.m pft.n seg.nbins seg.median_kernel seg.polarity
// vein.tau vein.margin weights.ws weights.wc weights.wv split.n_ref
// split.n_test split.seed split.permissive.
ConfigPairs to_pairs(const PipelineConfig& cfg);

// Throws std::invalid_argument on an unknown key or unparsable value.
void apply_setting(PipelineConfig& cfg, const std::string& key, const std::string& value);

// Space-separated `key=value` list, as written on the index CONFIG line.
std::string format_config_line(const PipelineConfig& cfg);

// Parses a flat `key = value` file; '#' starts a comment. Throws
// std::invalid_argument naming the file and line on error.
ConfigPairs read_config_file(const std::string& path);

// Shortest decimal that round-trips to the same double.
std::string format_real(double v);
double parse_real(const std::string& s);

}  // namespace leafret
