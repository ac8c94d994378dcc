#include "cli.hpp"

#include <chrono>
#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <map>
#include <ostream>
#include <sstream>
#include <thread>

#include <CLI11.hpp>

#include "leafret/errors.hpp"
#include "leafret/image_io.hpp"
#include "leafret/ranking.hpp"
#include "leafret/retrieval_index.hpp"
#include "leafret/segmentation.hpp"

namespace leafret::cli {

namespace fs = std::filesystem;

namespace {

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

void print_failures(const std::vector<ExtractionFailure>& failures, std::ostream& err) {
    for (const auto& f : failures) {
        err << "warning: skipped " << f.path << " [" << f.stage << "]: " << f.message << '\n';
    }
}

void print_warnings(const std::vector<std::string>& warnings, std::ostream& err) {
    for (const auto& w : warnings) err << "warning: " << w << '\n';
}

}  // namespace

int cmd_build(const fs::path& root, const fs::path& index_path, const Options& opt,
              std::ostream& out, std::ostream& err) {
    try {
        const auto t0 = std::chrono::steady_clock::now();
        const auto listing = ingest_dataset(root);
        const DatasetSplit split = split_dataset(listing, opt.config.split);
        print_warnings(split.warnings, err);
        const BuildResult built = build_index(root, split.reference, opt.config, opt.jobs);
        print_failures(built.failures, err);
        save_index(built.index, index_path);
        out << "indexed " << built.index.records.size() << " of " << split.reference.size()
            << " reference images (" << built.failures.size() << " failed) into "
            << index_path.string() << '\n';
        out << "elapsed " << std::fixed << std::setprecision(2) << seconds_since(t0) << " s\n";
        return kOk;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kDataError;
    }
}

int cmd_query(const fs::path& index_path, const fs::path& image_path, const Options& opt,
              std::ostream& out, std::ostream& err) {
    try {
        const Index index = load_index(index_path);
        PipelineConfig cfg = index.config;
        const auto snapshot = to_pairs(index.config);
        for (const auto& [key, value] : opt.overrides) {
            if (key.rfind("weights.", 0) == 0) {
                apply_setting(cfg, key, value);
                continue;
            }
            PipelineConfig probe = index.config;
            apply_setting(probe, key, value);
            if (to_pairs(probe) != snapshot) {
                err << "error: " << key << " is fixed by the index (" << index_path.string()
                    << "); rebuild the index to change it\n";
                return kUsageError;
            }
        }
        cfg.weights.validate();

        const FeatureVector q = normalize_vector(extract_features_from_file(image_path, cfg), index.stats);
        const RankedResult result = top_species(index, q, opt.top_n, cfg.weights);
        out << "rank  species  file  distance\n";
        for (const auto& e : result.entries) {
            out << e.rank << "  " << e.species << "  " << e.path << "  " << std::fixed
                << std::setprecision(6) << e.distance << '\n';
        }
        return kOk;
    } catch (const PipelineError& e) {
        err << "error [" << e.stage() << "]: " << e.what() << '\n';
        return kDataError;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kDataError;
    }
}

int cmd_evaluate(const fs::path& root, const Options& opt, const std::optional<fs::path>& report_path,
                 const std::optional<fs::path>& index_out, std::ostream& out, std::ostream& err) {
    try {
        const auto t0 = std::chrono::steady_clock::now();
        const auto listing = ingest_dataset(root);
        const DatasetSplit split = split_dataset(listing, opt.config.split);
        print_warnings(split.warnings, err);
        if (split.test.empty()) throw CorpusError("split produced no test images");

        BuildResult built = build_index(root, split.reference, opt.config, opt.jobs);
        err << "indexed " << built.index.records.size() << " references in " << std::fixed
            << std::setprecision(2) << seconds_since(t0) << " s\n";
        if (index_out) save_index(built.index, *index_out);

        const auto tests = extract_all(root, split.test, opt.config, opt.jobs);
        std::vector<LabeledQuery> queries;
        std::vector<ExtractionFailure> failures = built.failures;
        for (const auto& t : tests) {
            if (t.ok) {
                queries.push_back({t.entry.species, t.entry.path, t.features});
            } else {
                failures.push_back(t.failure);
            }
        }
        print_failures(failures, err);
        if (queries.empty()) throw PipelineError("evaluate", "every test image failed extraction");

        EvaluationReport report = evaluate(built.index, queries, {1, 3, 5}, opt.config.weights);
        report.failures = std::move(failures);
        write_report_text(report, opt.config, out);
        if (report_path) {
            std::ofstream f(*report_path, std::ios::binary | std::ios::trunc);
            if (!f) throw ImageIoError("cannot write report " + report_path->string());
            write_report_machine(report, f);
        }
        err << "evaluated " << report.queries << " queries in " << std::fixed << std::setprecision(2)
            << seconds_since(t0) << " s\n";
        return kOk;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kDataError;
    }
}

int cmd_debug(const fs::path& image_path, const fs::path& out_dir, const Options& opt,
              std::ostream& out, std::ostream& err) {
    try {
        std::error_code ec;
        fs::create_directories(out_dir, ec);
        if (ec || !fs::is_directory(out_dir)) {
            throw ImageIoError("cannot create output directory " + out_dir.string());
        }
        const RasterImage img = load_image(image_path);
        const SegmentationTrace t = trace_segmentation(img, opt.config.seg);
        save_gray(t.gray, out_dir / "gray.png");
        save_mask(t.binary, out_dir / "binary.png");
        save_mask(t.filtered, out_dir / "median.png");
        save_mask(t.restored, out_dir / "restored.png");
        save_mask(t.filled, out_dir / "filled.png");
        save_mask(t.leaf, out_dir / "leaf.png");
        const auto veins = vein_images(t.gray, t.leaf, opt.config.vein);
        for (std::size_t i = 0; i < veins.size(); ++i) {
            save_mask(veins[i], out_dir / ("vein_r" + std::to_string(opt.config.vein.radii[i]) + ".png"));
        }

        const FeatureVector f = extract_features(img, opt.config);
        std::ofstream dump(out_dir / "features.txt", std::ios::trunc);
        if (!dump) throw ImageIoError("cannot write " + (out_dir / "features.txt").string());
        dump << "# " << format_config_line(opt.config) << '\n';
        dump << "threshold " << format_real(t.threshold) << '\n';
        dump << "polarity " << to_string(t.resolved_polarity) << '\n';
        dump << "area " << t.leaf.count() << '\n';
        auto group = [&](const char* name, std::span<const double> v) {
            for (std::size_t i = 0; i < v.size(); ++i) dump << name << '[' << i << "] " << format_real(v[i]) << '\n';
        };
        group("shape", f.shape());
        group("color", f.color());
        group("vein", f.vein());
        dump.flush();
        if (!dump) throw ImageIoError("cannot write " + (out_dir / "features.txt").string());
        out << "wrote debug images and features.txt to " << out_dir.string() << '\n';
        return kOk;
    } catch (const PipelineError& e) {
        err << "error [" << e.stage() << "]: " << e.what() << '\n';
        return kDataError;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kDataError;
    }
}

namespace {

struct FlagSpec {
    const char* flag;
    const char* key;
    const char* help;
};

constexpr FlagSpec kFlags[] = {
    {"--nbins", "seg.nbins", "Histogram bins for the adaptive threshold"},
    {"--median-kernel", "seg.median_kernel", "Odd median filter size"},
    {"--polarity", "seg.polarity", "auto, dark_leaf or light_leaf"},
    {"--pft-m", "pft.m", "Radial frequencies"},
    {"--pft-n", "pft.n", "Angular frequencies"},
    {"--vein-tau", "vein.tau", "Opening-residue threshold for vein pixels"},
    {"--vein-margin", "vein.margin", "Width of the excluded leaf margin"},
    {"--ws", "weights.ws", "Shape weight"},
    {"--wc", "weights.wc", "Color weight"},
    {"--wv", "weights.wv", "Vein weight"},
    {"--n-ref", "split.n_ref", "Reference images per species"},
    {"--n-test", "split.n_test", "Test images per species"},
    {"--seed", "split.seed", "Split seed"},
};

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Leaf image retrieval: build, query and evaluate feature indexes", "leafret"};
    app.require_subcommand(1);

    std::map<std::string, std::string> flag_values;
    std::vector<std::pair<std::string, CLI::Option*>> flag_opts;
    for (const auto& f : kFlags) {
        flag_opts.emplace_back(f.key, app.add_option(f.flag, flag_values[f.key], f.help));
    }
    bool permissive = false;
    auto* permissive_opt = app.add_flag("--permissive-split", permissive,
                                        "Scale the split down for species with too few images");
    std::string config_file;
    app.add_option("--config", config_file, "Flat key = value configuration file");
    unsigned jobs = std::max(1u, std::thread::hardware_concurrency());
    app.add_option("--jobs", jobs, "Extraction threads")->check(CLI::PositiveNumber);
    int top_n = 5;
    app.add_option("--top-n", top_n, "Species to list per query")->check(CLI::PositiveNumber);

    std::string root, index_path, image_path, out_dir, report_path, index_out;
    auto* build = app.add_subcommand("build", "Index the reference side of a corpus")->fallthrough();
    build->add_option("root", root, "Corpus root (root/<species>/<image>)")->required();
    build->add_option("index", index_path, "Output index file")->required();

    auto* query = app.add_subcommand("query", "Rank the species closest to one image")->fallthrough();
    query->add_option("index", index_path, "Index file")->required();
    query->add_option("image", image_path, "Query image")->required();

    auto* evaluate = app.add_subcommand("evaluate", "Split, index, and score top-1/3/5 accuracy")->fallthrough();
    evaluate->add_option("root", root, "Corpus root")->required();
    evaluate->add_option("--report", report_path, "Write the per-species table to this file");
    evaluate->add_option("--save-index", index_out, "Also save the reference index");

    auto* debug = app.add_subcommand("debug", "Dump segmentation stages and features for one image")->fallthrough();
    debug->add_option("image", image_path, "Input image")->required();
    debug->add_option("out_dir", out_dir, "Output directory")->required();

    std::vector<std::string> argv_store{"leafret"};
    argv_store.insert(argv_store.end(), args.begin(), args.end());
    std::vector<char*> argv;
    for (auto& a : argv_store) argv.push_back(a.data());
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kOk : kUsageError;
    }

    Options opt;
    opt.jobs = jobs;
    opt.top_n = top_n;
    try {
        // defaults < config file < flags
        if (config_file.empty()) {
            if (const char* env = std::getenv("LEAF_CONFIG"); env != nullptr && *env != '\0') config_file = env;
        }
        std::map<std::string, std::string> settings;
        std::vector<std::string> order;
        auto set = [&](const std::string& k, const std::string& v) {
            if (!settings.contains(k)) order.push_back(k);
            settings[k] = v;
        };
        if (!config_file.empty()) {
            for (const auto& [k, v] : read_config_file(config_file)) set(k, v);
        }
        for (const auto& [key, o] : flag_opts) {
            if (o->count() > 0) set(key, flag_values[key]);
        }
        if (permissive_opt->count() > 0) set("split.permissive", permissive ? "1" : "0");
        for (const auto& k : order) {
            apply_setting(opt.config, k, settings[k]);
            opt.overrides.emplace_back(k, settings[k]);
        }
        opt.config.validate();
    } catch (const std::invalid_argument& e) {
        err << "error: " << e.what() << '\n';
        return kUsageError;
    }

    if (*build) return cmd_build(root, index_path, opt, out, err);
    if (*query) return cmd_query(index_path, image_path, opt, out, err);
    if (*evaluate) {
        std::optional<fs::path> rp;
        std::optional<fs::path> io;
        if (!report_path.empty()) rp = report_path;
        if (!index_out.empty()) io = index_out;
        return cmd_evaluate(root, opt, rp, io, out, err);
    }
    if (*debug) return cmd_debug(image_path, out_dir, opt, out, err);
    return kUsageError;
}

}  // namespace leafret::cli
