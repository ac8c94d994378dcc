#include "leafret/config.hpp"

#include <charconv>
#include <fstream>
#include <stdexcept>
#include <system_error>

namespace leafret {

void Weights::validate() const {
    if (ws < 0.0 || wc < 0.0 || wv < 0.0) throw std::invalid_argument("weights must be non-negative");
    if (!(sum() > 0.0)) throw std::invalid_argument("weights must not all be zero");
}

void SplitConfig::validate() const {
    if (n_ref < 1) throw std::invalid_argument("split.n_ref must be >= 1");
    if (n_test < 0) throw std::invalid_argument("split.n_test must be >= 0");
}

void PipelineConfig::validate() const {
    seg.validate();
    pft.validate();
    vein.validate();
    weights.validate();
    split.validate();
}

std::string format_real(double v) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

double parse_real(const std::string& s) {
    double v = 0.0;
    const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
    if (res.ec != std::errc{} || res.ptr != s.data() + s.size()) {
        throw std::invalid_argument("not a real number: '" + s + "'");
    }
    return v;
}

namespace {

template <typename Int>
Int parse_int(const std::string& s) {
    Int v{};
    const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
    if (res.ec != std::errc{} || res.ptr != s.data() + s.size()) {
        throw std::invalid_argument("not an integer: '" + s + "'");
    }
    return v;
}

bool parse_bool(const std::string& s) {
    if (s == "1" || s == "true") return true;
    if (s == "0" || s == "false") return false;
    throw std::invalid_argument("not a boolean: '" + s + "'");
}

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

}  // namespace

ConfigPairs to_pairs(const PipelineConfig& cfg) {
    return {
        {"pft.m", std::to_string(cfg.pft.m)},
        {"pft.n", std::to_string(cfg.pft.n)},
        {"seg.nbins", std::to_string(cfg.seg.nbins)},
        {"seg.median_kernel", std::to_string(cfg.seg.median_kernel)},
        {"seg.polarity", to_string(cfg.seg.polarity)},
        {"vein.tau", format_real(cfg.vein.tau)},
        {"vein.margin", std::to_string(cfg.vein.margin_width)},
        {"weights.ws", format_real(cfg.weights.ws)},
        {"weights.wc", format_real(cfg.weights.wc)},
        {"weights.wv", format_real(cfg.weights.wv)},
        {"split.n_ref", std::to_string(cfg.split.n_ref)},
        {"split.n_test", std::to_string(cfg.split.n_test)},
        {"split.seed", std::to_string(cfg.split.seed)},
        {"split.permissive", cfg.split.permissive ? "1" : "0"},
    };
}

void apply_setting(PipelineConfig& cfg, const std::string& key, const std::string& value) {
    try {
        if (key == "pft.m") cfg.pft.m = parse_int<int>(value);
        else if (key == "pft.n") cfg.pft.n = parse_int<int>(value);
        else if (key == "seg.nbins") cfg.seg.nbins = parse_int<int>(value);
        else if (key == "seg.median_kernel") cfg.seg.median_kernel = parse_int<int>(value);
        else if (key == "seg.polarity") cfg.seg.polarity = parse_polarity(value);
        else if (key == "vein.tau") cfg.vein.tau = parse_real(value);
        else if (key == "vein.margin") cfg.vein.margin_width = parse_int<int>(value);
        else if (key == "weights.ws") cfg.weights.ws = parse_real(value);
        else if (key == "weights.wc") cfg.weights.wc = parse_real(value);
        else if (key == "weights.wv") cfg.weights.wv = parse_real(value);
        else if (key == "split.n_ref") cfg.split.n_ref = parse_int<int>(value);
        else if (key == "split.n_test") cfg.split.n_test = parse_int<int>(value);
        else if (key == "split.seed") cfg.split.seed = parse_int<std::uint64_t>(value);
        else if (key == "split.permissive") cfg.split.permissive = parse_bool(value);
        else throw std::invalid_argument("unknown configuration key");
    } catch (const std::invalid_argument& e) {
        throw std::invalid_argument("config " + key + "=" + value + ": " + e.what());
    }
}

std::string format_config_line(const PipelineConfig& cfg) {
    std::string line;
    for (const auto& [k, v] : to_pairs(cfg)) {
        if (!line.empty()) line += ' ';
        line += k + "=" + v;
    }
    return line;
}

ConfigPairs read_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open config file " + path);
    ConfigPairs out;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            throw std::invalid_argument(path + ":" + std::to_string(lineno) + ": expected key = value");
        }
        out.emplace_back(trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
    }
    return out;
}

}  // namespace leafret
