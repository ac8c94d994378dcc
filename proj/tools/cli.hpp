#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "leafret/config.hpp"

namespace leafret::cli {

enum ExitCode : int { kOk = 0, kDataError = 1, kUsageError = 2 };

struct Options {
    PipelineConfig config;
    unsigned jobs = 1;
    int top_n = 5;
    // Settings given explicitly on the command line or in a config file,
    // after precedence resolution; used by `query` to detect conflicts with
    // the index snapshot.
    ConfigPairs overrides;
};

int cmd_build(const std::filesystem::path& root, const std::filesystem::path& index_path,
              const Options& opt, std::ostream& out, std::ostream& err);

int cmd_query(const std::filesystem::path& index_path, const std::filesystem::path& image_path,
              const Options& opt, std::ostream& out, std::ostream& err);

// `report_path` receives the machine-readable per-species table when set;
// `index_out` receives the reference index when set.
int cmd_evaluate(const std::filesystem::path& root, const Options& opt,
                 const std::optional<std::filesystem::path>& report_path,
                 const std::optional<std::filesystem::path>& index_out, std::ostream& out,
                 std::ostream& err);

int cmd_debug(const std::filesystem::path& image_path, const std::filesystem::path& out_dir,
              const Options& opt, std::ostream& out, std::ostream& err);

// Full command line, argv[0] excluded. Returns the process exit status.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace leafret::cli
