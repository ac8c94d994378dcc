#include "leafret/retrieval_index.hpp"

#include <algorithm>
#include <atomic>
#include <cctype>
#include <cmath>
#include <fstream>
#include <istream>
#include <map>
#include <ostream>
#include <random>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "leafret/appearance.hpp"
#include "leafret/errors.hpp"
#include "leafret/image_io.hpp"
#include "leafret/segmentation.hpp"
#include "leafret/shape_descriptor.hpp"

namespace leafret {

namespace fs = std::filesystem;

FeatureLayout FeatureLayout::for_config(const PipelineConfig& cfg) {
    return {cfg.pft.size(), 9, cfg.vein.radii.size()};
}

FeatureVector extract_features(const RasterImage& img, const PipelineConfig& cfg) {
    const LeafRegion leaf = segment_leaf(img, cfg.seg);
    const ShapeDescriptor shape = shape_descriptor(leaf.mask, cfg.pft);
    const ColorMoments color = color_moments(leaf.color, leaf.mask);
    const VeinFeatures vein = vein_features(leaf.gray, leaf.mask, cfg.vein);

    FeatureVector v;
    v.layout = FeatureLayout::for_config(cfg);
    v.values.reserve(v.layout.dims());
    v.values.insert(v.values.end(), shape.values.begin(), shape.values.end());
    v.values.insert(v.values.end(), color.values.begin(), color.values.end());
    v.values.insert(v.values.end(), vein.values.begin(), vein.values.end());
    for (double x : v.values) {
        if (!std::isfinite(x)) throw DegenerateShapeError("non-finite feature value");
    }
    return v;
}

FeatureVector extract_features_from_file(const fs::path& path, const PipelineConfig& cfg) {
    try {
        return extract_features(load_image(path), cfg);
    } catch (const PipelineError& e) {
        throw PipelineError(e.stage(), path.string() + ": " +
                                           std::string(e.what()).substr(e.stage().size() + 2));
    }
}

bool is_image_file(const fs::path& p) {
    std::string ext = p.extension().string();
    std::transform(ext.begin(), ext.end(), ext.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return ext == ".png" || ext == ".jpg" || ext == ".jpeg";
}

std::vector<CorpusEntry> ingest_dataset(const fs::path& root) {
    std::error_code ec;
    if (!fs::is_directory(root, ec)) throw CorpusError("corpus root not found: " + root.string());

    std::vector<fs::path> species_dirs;
    for (const auto& e : fs::directory_iterator(root)) {
        if (e.is_directory()) species_dirs.push_back(e.path());
    }
    std::sort(species_dirs.begin(), species_dirs.end());

    std::vector<CorpusEntry> out;
    for (const auto& dir : species_dirs) {
        const std::string species = dir.filename().string();
        if (species.find_first_of("\t\n\r") != std::string::npos) {
            throw CorpusError("species name contains control characters: " + dir.string());
        }
        std::vector<std::string> files;
        for (const auto& e : fs::directory_iterator(dir)) {
            if (e.is_regular_file() && is_image_file(e.path())) {
                files.push_back(e.path().filename().string());
            }
        }
        if (files.empty()) throw CorpusError("species directory has no images: " + dir.string());
        std::sort(files.begin(), files.end());
        for (const auto& f : files) out.push_back({species, species + "/" + f});
    }
    if (out.empty()) throw CorpusError("corpus is empty: " + root.string());
    return out;
}

namespace {

std::uint64_t fnv1a(const std::string& s) {
    std::uint64_t h = 1469598103934665603ULL;
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    return h;
}

// Unbiased draw in [0, bound) from the fully specified 64-bit Mersenne
// twister, so splits are identical across standard libraries.
std::uint64_t draw_below(std::mt19937_64& gen, std::uint64_t bound) {
    const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                                std::numeric_limits<std::uint64_t>::max() % bound;
    std::uint64_t x = 0;
    do {
        x = gen();
    } while (x >= limit);
    return x % bound;
}

}  // namespace

DatasetSplit split_dataset(const std::vector<CorpusEntry>& listing, const SplitConfig& cfg) {
    cfg.validate();
    std::map<std::string, std::vector<CorpusEntry>> by_species;
    for (const auto& e : listing) by_species[e.species].push_back(e);

    DatasetSplit split;
    const int wanted = cfg.n_ref + cfg.n_test;
    for (auto& [species, entries] : by_species) {
        std::sort(entries.begin(), entries.end(),
                  [](const CorpusEntry& a, const CorpusEntry& b) { return a.path < b.path; });
        std::mt19937_64 gen(cfg.seed ^ fnv1a(species));
        for (std::size_t i = entries.size(); i > 1; --i) {
            std::swap(entries[i - 1], entries[draw_below(gen, i)]);
        }

        const int have = static_cast<int>(entries.size());
        int n_ref = cfg.n_ref;
        int n_test = cfg.n_test;
        if (have < wanted) {
            if (!cfg.permissive) {
                throw CorpusError("species '" + species + "' has " + std::to_string(have) +
                                  " images, need " + std::to_string(wanted));
            }
            n_ref = std::max(1, have * cfg.n_ref / wanted);
            n_test = have - n_ref;
            split.warnings.push_back("species '" + species + "' has " + std::to_string(have) +
                                     " images; using " + std::to_string(n_ref) + " reference / " +
                                     std::to_string(n_test) + " test");
        }
        split.reference.insert(split.reference.end(), entries.begin(), entries.begin() + n_ref);
        split.test.insert(split.test.end(), entries.begin() + n_ref,
                          entries.begin() + n_ref + n_test);
    }
    return split;
}

bool operator==(const Index& a, const Index& b) {
    return a.records == b.records && a.stats == b.stats && to_pairs(a.config) == to_pairs(b.config);
}

NormalizationStats compute_stats(const std::vector<IndexRecord>& records) {
    NormalizationStats s;
    if (records.empty()) return s;
    s.min = records.front().features.values;
    s.max = records.front().features.values;
    for (const auto& r : records) {
        const auto& v = r.features.values;
        if (v.size() != s.min.size()) throw std::invalid_argument("compute_stats: ragged records");
        for (std::size_t d = 0; d < v.size(); ++d) {
            s.min[d] = std::min(s.min[d], v[d]);
            s.max[d] = std::max(s.max[d], v[d]);
        }
    }
    return s;
}

FeatureVector normalize_vector(const FeatureVector& v, const NormalizationStats& stats) {
    if (v.values.size() != stats.min.size() || stats.min.size() != stats.max.size()) {
        throw std::invalid_argument("normalize_vector: dimension mismatch (" +
                                    std::to_string(v.values.size()) + " vs " +
                                    std::to_string(stats.min.size()) + ")");
    }
    FeatureVector out = v;
    for (std::size_t d = 0; d < v.values.size(); ++d) {
        const double span = stats.max[d] - stats.min[d];
        out.values[d] = span > 0.0 ? std::clamp((v.values[d] - stats.min[d]) / span, 0.0, 1.0) : 0.0;
    }
    return out;
}

std::vector<ExtractionResult> extract_all(const fs::path& root, const std::vector<CorpusEntry>& entries,
                                          const PipelineConfig& cfg, unsigned jobs) {
    std::vector<ExtractionResult> results(entries.size());
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t i = next++; i < entries.size(); i = next++) {
            auto& r = results[i];
            r.entry = entries[i];
            try {
                r.features = extract_features_from_file(root / entries[i].path, cfg);
                r.ok = true;
            } catch (const PipelineError& e) {
                r.failure = {entries[i].path, e.stage(), e.what()};
            } catch (const std::exception& e) {
                r.failure = {entries[i].path, "internal", e.what()};
            }
        }
    };
    jobs = std::max(1u, std::min<unsigned>(jobs, static_cast<unsigned>(entries.size())));
    if (jobs == 1) {
        worker();
    } else {
        std::vector<std::jthread> pool;
        for (unsigned t = 0; t < jobs; ++t) pool.emplace_back(worker);
    }
    return results;
}

BuildResult assemble_index(const std::vector<ExtractionResult>& extracted, const PipelineConfig& cfg) {
    BuildResult out;
    out.index.config = cfg;
    for (const auto& r : extracted) {
        if (r.ok) {
            out.index.records.push_back({0, r.entry.species, r.entry.path, r.features});
        } else {
            out.failures.push_back(r.failure);
        }
    }
    if (out.index.records.empty()) {
        throw PipelineError("build-index", "every reference image failed extraction");
    }
    std::sort(out.index.records.begin(), out.index.records.end(),
              [](const IndexRecord& a, const IndexRecord& b) {
                  return std::tie(a.species, a.path) < std::tie(b.species, b.path);
              });
    std::int64_t id = 1;
    for (auto& r : out.index.records) r.id = id++;
    out.index.stats = compute_stats(out.index.records);
    return out;
}

BuildResult build_index(const fs::path& root, const std::vector<CorpusEntry>& entries,
                        const PipelineConfig& cfg, unsigned jobs) {
    if (entries.empty()) throw CorpusError("no reference images to index");
    cfg.validate();
    return assemble_index(extract_all(root, entries, cfg, jobs), cfg);
}

// ---------------------------------------------------------------------------
// Text format
//
//   LEAFIDX 1 <dims>
//   STATS <min_1> ... <min_dims> <max_1> ... <max_dims>
//   CONFIG <key>=<value> ... layout=shape:<S>,color:<C>,vein:<V>
//   REC\t<id>\t<species>\t<path>\t<f_1>\t...\t<f_dims>
//   END <record count>

namespace {

constexpr const char* kMagic = "LEAFIDX";
constexpr int kVersion = 1;

std::string layout_string(const FeatureLayout& l) {
    return "shape:" + std::to_string(l.shape) + ",color:" + std::to_string(l.color) +
           ",vein:" + std::to_string(l.vein);
}

std::vector<std::string> split_on(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : s) {
        if (c == sep) {
            out.push_back(cur);
            cur.clear();
        } else {
            cur += c;
        }
    }
    out.push_back(cur);
    return out;
}

std::vector<std::string> words(const std::string& s) {
    std::istringstream in(s);
    std::vector<std::string> out;
    for (std::string w; in >> w;) out.push_back(w);
    return out;
}

}  // namespace

void write_index(const Index& index, std::ostream& out) {
    const FeatureLayout layout = index.layout();
    const std::size_t dims = layout.dims();
    out << kMagic << ' ' << kVersion << ' ' << dims << '\n';
    out << "STATS";
    for (double v : index.stats.min) out << ' ' << format_real(v);
    for (double v : index.stats.max) out << ' ' << format_real(v);
    out << '\n';
    out << "CONFIG " << format_config_line(index.config) << " layout=" << layout_string(layout) << '\n';
    for (const auto& r : index.records) {
        if (r.features.values.size() != dims) {
            throw std::invalid_argument("write_index: record " + std::to_string(r.id) +
                                        " has wrong feature dimension");
        }
        out << "REC\t" << r.id << '\t' << r.species << '\t' << r.path;
        for (double v : r.features.values) out << '\t' << format_real(v);
        out << '\n';
    }
    out << "END " << index.records.size() << '\n';
}

Index read_index(std::istream& in) {
    std::string line;
    std::size_t lineno = 1;
    if (!std::getline(in, line)) throw VersionMismatchError("empty index file");
    const auto head = words(line);
    if (head.size() != 3 || head[0] != kMagic) {
        throw VersionMismatchError("missing " + std::string(kMagic) + " header");
    }
    if (head[1] != std::to_string(kVersion)) {
        throw VersionMismatchError("unsupported index version " + head[1]);
    }
    std::size_t dims = 0;
    try {
        dims = std::stoul(head[2]);
    } catch (const std::exception&) {
        throw MalformedIndexError(lineno, "bad dimension field");
    }

    Index index;
    ++lineno;
    if (!std::getline(in, line)) throw MalformedIndexError(lineno, "missing STATS line");
    const auto stats = words(line);
    if (stats.empty() || stats[0] != "STATS") throw MalformedIndexError(lineno, "expected STATS");
    if (stats.size() != 1 + 2 * dims) {
        throw MalformedIndexError(lineno, "STATS has " + std::to_string(stats.size() - 1) +
                                              " values, header declares " + std::to_string(dims) +
                                              " dimensions");
    }
    try {
        for (std::size_t d = 0; d < dims; ++d) index.stats.min.push_back(parse_real(stats[1 + d]));
        for (std::size_t d = 0; d < dims; ++d) index.stats.max.push_back(parse_real(stats[1 + dims + d]));
    } catch (const std::invalid_argument& e) {
        throw MalformedIndexError(lineno, e.what());
    }

    ++lineno;
    if (!std::getline(in, line)) throw MalformedIndexError(lineno, "missing CONFIG line");
    const auto conf = words(line);
    if (conf.empty() || conf[0] != "CONFIG") throw MalformedIndexError(lineno, "expected CONFIG");
    std::string layout_field;
    try {
        for (std::size_t i = 1; i < conf.size(); ++i) {
            const auto eq = conf[i].find('=');
            if (eq == std::string::npos) throw std::invalid_argument("bad pair '" + conf[i] + "'");
            const std::string key = conf[i].substr(0, eq);
            const std::string value = conf[i].substr(eq + 1);
            if (key == "layout") {
                layout_field = value;
            } else {
                apply_setting(index.config, key, value);
            }
        }
        index.config.validate();
    } catch (const std::invalid_argument& e) {
        throw MalformedIndexError(lineno, e.what());
    }
    const FeatureLayout layout = index.layout();
    if (layout.dims() != dims || (!layout_field.empty() && layout_field != layout_string(layout))) {
        throw MalformedIndexError(lineno, "dimension mismatch: configuration implies " +
                                              layout_string(layout) + ", header declares " +
                                              std::to_string(dims));
    }

    bool ended = false;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        if (ended) throw MalformedIndexError(lineno, "content after END");
        if (line.rfind("END", 0) == 0) {
            const auto end = words(line);
            if (end.size() != 2 || end[1] != std::to_string(index.records.size())) {
                throw MalformedIndexError(lineno, "END count does not match " +
                                                      std::to_string(index.records.size()) +
                                                      " records read");
            }
            ended = true;
            continue;
        }
        const auto fields = split_on(line, '\t');
        if (fields[0] != "REC") throw MalformedIndexError(lineno, "expected REC");
        if (fields.size() != 4 + dims) {
            throw MalformedIndexError(lineno, "record has " + std::to_string(fields.size()) +
                                                  " fields, expected " + std::to_string(4 + dims));
        }
        IndexRecord r;
        try {
            r.id = std::stoll(fields[1]);
            r.species = fields[2];
            r.path = fields[3];
            r.features.layout = layout;
            for (std::size_t d = 0; d < dims; ++d) r.features.values.push_back(parse_real(fields[4 + d]));
        } catch (const std::exception& e) {
            throw MalformedIndexError(lineno, e.what());
        }
        if (r.species.empty()) throw MalformedIndexError(lineno, "empty species");
        if (!index.records.empty() && r.id <= index.records.back().id) {
            throw MalformedIndexError(lineno, "record ids must be unique and increasing");
        }
        index.records.push_back(std::move(r));
    }
    if (in.bad()) throw MalformedIndexError(lineno, "read error");
    if (!ended) throw MalformedIndexError(lineno + 1, "truncated index: missing END line");
    if (index.records.empty()) throw MalformedIndexError(lineno, "index has no records");
    return index;
}

void save_index(const Index& index, const fs::path& path) {
    std::ostringstream buf;
    write_index(index, buf);
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw ImageIoError("cannot write index " + path.string());
    out << buf.str();
    if (!out) throw ImageIoError("cannot write index " + path.string());
}

Index load_index(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw CorpusError("cannot open index " + path.string());
    return read_index(in);
}

}  // namespace leafret
