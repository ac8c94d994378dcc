#include "leafret/ranking.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <map>
#include <ostream>
#include <set>
#include <stdexcept>

namespace leafret {

double group_distance(std::span<const double> q, std::span<const double> t) {
    if (q.size() != t.size()) {
        throw std::invalid_argument("group_distance: length mismatch (" + std::to_string(q.size()) +
                                    " vs " + std::to_string(t.size()) + ")");
    }
    double s = 0.0;
    for (std::size_t i = 0; i < q.size(); ++i) {
        const double d = q[i] - t[i];
        s += d * d;
    }
    return std::sqrt(s);
}

double combined_distance(const FeatureVector& q, const FeatureVector& t, const Weights& w) {
    if (q.layout != t.layout) throw std::invalid_argument("combined_distance: layout mismatch");
    const double ds = group_distance(q.shape(), t.shape());
    const double dc = group_distance(q.color(), t.color());
    const double dv = group_distance(q.vein(), t.vein());
    return (w.ws * ds + w.wc * dc + w.wv * dv) / w.sum();
}

namespace {

std::vector<FeatureVector> normalized_records(const Index& index) {
    std::vector<FeatureVector> out;
    out.reserve(index.records.size());
    for (const auto& r : index.records) out.push_back(normalize_vector(r.features, index.stats));
    return out;
}

RankedResult rank_against(const Index& index, const std::vector<FeatureVector>& refs,
                          const FeatureVector& q, const Weights& w) {
    if (index.records.empty()) throw std::invalid_argument("query against an empty index");
    RankedResult out;
    out.entries.reserve(refs.size());
    for (std::size_t i = 0; i < refs.size(); ++i) {
        const auto& r = index.records[i];
        out.entries.push_back({0, r.id, r.species, r.path, combined_distance(q, refs[i], w)});
    }
    std::sort(out.entries.begin(), out.entries.end(), [](const RankedEntry& a, const RankedEntry& b) {
        if (a.distance != b.distance) return a.distance < b.distance;
        return a.record_id < b.record_id;
    });
    int rank = 1;
    for (auto& e : out.entries) e.rank = rank++;
    return out;
}

}  // namespace

RankedResult rank_records(const Index& index, const FeatureVector& q, const Weights& w) {
    w.validate();
    return rank_against(index, normalized_records(index), q, w);
}

RankedResult query_top_n(const Index& index, const FeatureVector& q, int n, const Weights& w) {
    if (n < 1) throw std::invalid_argument("query_top_n: n must be >= 1");
    RankedResult all = rank_records(index, q, w);
    if (all.entries.size() > static_cast<std::size_t>(n)) all.entries.resize(n);
    return all;
}

RankedResult collapse_species(const RankedResult& records, int n) {
    RankedResult out;
    std::set<std::string> seen;
    for (const auto& e : records.entries) {
        if (static_cast<int>(out.entries.size()) >= n) break;
        if (!seen.insert(e.species).second) continue;
        out.entries.push_back(e);
        out.entries.back().rank = static_cast<int>(out.entries.size());
    }
    return out;
}

RankedResult top_species(const Index& index, const FeatureVector& q, int n, const Weights& w) {
    if (n < 1) throw std::invalid_argument("top_species: n must be >= 1");
    return collapse_species(rank_records(index, q, w), n);
}

double EvaluationReport::accuracy(std::size_t k) const {
    return queries == 0 ? 0.0 : static_cast<double>(relevant.at(k)) / static_cast<double>(queries);
}

EvaluationReport evaluate(const Index& index, const std::vector<LabeledQuery>& tests,
                          const std::vector<int>& ns, const Weights& w) {
    if (tests.empty()) throw std::invalid_argument("evaluate: no test queries");
    if (ns.empty()) throw std::invalid_argument("evaluate: no cutoffs");
    w.validate();
    const int max_n = *std::max_element(ns.begin(), ns.end());
    if (*std::min_element(ns.begin(), ns.end()) < 1) throw std::invalid_argument("evaluate: n must be >= 1");

    const auto refs = normalized_records(index);
    EvaluationReport report;
    report.ns = ns;
    report.relevant.assign(ns.size(), 0);
    std::map<std::string, SpeciesRow> rows;

    for (const auto& t : tests) {
        const FeatureVector q = normalize_vector(t.features, index.stats);
        const RankedResult species = collapse_species(rank_against(index, refs, q, w), max_n);
        auto& row = rows[t.species];
        row.species = t.species;
        row.hits.resize(ns.size(), 0);
        ++row.queries;
        ++report.queries;
        for (std::size_t k = 0; k < ns.size(); ++k) {
            const auto end = species.entries.begin() +
                             std::min<std::ptrdiff_t>(ns[k], std::ssize(species.entries));
            const bool hit = std::any_of(species.entries.begin(), end,
                                         [&](const RankedEntry& e) { return e.species == t.species; });
            if (hit) {
                ++row.hits[k];
                ++report.relevant[k];
            }
        }
    }
    for (auto& [_, row] : rows) report.rows.push_back(std::move(row));
    return report;
}

std::string format_percent(std::int64_t relevant, std::int64_t total) {
    if (total <= 0) return "0.00";
    // Integer half-up rounding of 10000 * relevant / total.
    const std::int64_t hundredths = (2 * relevant * 10000 + total) / (2 * total);
    std::string frac = std::to_string(hundredths % 100);
    if (frac.size() < 2) frac.insert(0, "0");
    return std::to_string(hundredths / 100) + "." + frac;
}

void write_report_text(const EvaluationReport& report, const PipelineConfig& cfg, std::ostream& out) {
    out << "# " << format_config_line(cfg) << '\n';
    std::size_t width = 7;
    for (const auto& r : report.rows) width = std::max(width, r.species.size());

    out << std::left << std::setw(static_cast<int>(width)) << "species" << std::right
        << std::setw(8) << "queries";
    for (int n : report.ns) out << std::setw(9) << ("top-" + std::to_string(n));
    out << '\n';
    for (const auto& r : report.rows) {
        out << std::left << std::setw(static_cast<int>(width)) << r.species << std::right
            << std::setw(8) << r.queries;
        for (auto h : r.hits) out << std::setw(8) << format_percent(h, r.queries) << '%';
        out << '\n';
    }
    out << std::left << std::setw(static_cast<int>(width)) << "AGGREGATE" << std::right
        << std::setw(8) << report.queries;
    for (auto rel : report.relevant) out << std::setw(8) << format_percent(rel, report.queries) << '%';
    out << '\n';
    if (!report.failures.empty()) {
        out << "failures: " << report.failures.size() << '\n';
        for (const auto& f : report.failures) out << "  " << f.path << " [" << f.stage << "] " << f.message << '\n';
    }
}

void write_report_machine(const EvaluationReport& report, std::ostream& out) {
    for (const auto& r : report.rows) {
        out << r.species;
        for (auto h : r.hits) out << ' ' << format_percent(h, r.queries);
        out << '\n';
    }
    out << "AGGREGATE";
    for (auto rel : report.relevant) out << ' ' << format_percent(rel, report.queries);
    out << '\n';
}

}  // namespace leafret
