#include "elicit/eval.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include <fmt/format.h>

#include "elicit/errors.hpp"
#include "elicit/serialization.hpp"

namespace elicit {

namespace {

void require_records(std::span<const AnnotationRecord> records) {
    if (records.empty()) throw ContractViolation("metrics need at least one annotation record");
}

// 1-based rank of the first relevant item, 0 when there is none.
std::size_t first_relevant_rank(const AnnotationRecord& r) {
    if (r.selected_rank) return *r.selected_rank;
    const auto rel = r.relevance_vector();
    auto it = std::find(rel.begin(), rel.end(), 1);
    return it == rel.end() ? 0 : static_cast<std::size_t>(it - rel.begin()) + 1;
}

}  // namespace

std::vector<int> AnnotationRecord::relevance_vector() const {
    std::vector<int> out(ranked_item_ids.size(), 0);
    if (selected_rank) {
        if (*selected_rank <= out.size()) out[*selected_rank - 1] = 1;
        return out;
    }
    for (std::size_t i = 0; i < ranked_item_ids.size(); ++i) {
        auto it = relevance.find(ranked_item_ids[i]);
        out[i] = it != relevance.end() && it->second > 0 ? 1 : 0;
    }
    return out;
}

void AnnotationRecord::validate() const {
    if (query_id.empty()) throw ParseError("query_id must not be empty");
    if (ranked_item_ids.empty()) throw ParseError("record " + query_id + " has an empty ranked_item_ids list");
    for (const auto& [item, grade] : relevance)
        if (grade != 0 && grade != 1)
            throw ParseError("record " + query_id + ": relevance of '" + item + "' must be 0 or 1");
    if (selected_rank && (*selected_rank == 0 || *selected_rank > ranked_item_ids.size()))
        throw ParseError("record " + query_id + ": selected_rank must lie in 1.." +
                         std::to_string(ranked_item_ids.size()));
    if (initial_rank.has_value() != updated_rank.has_value())
        throw ParseError("record " + query_id + ": initial_rank and updated_rank go together");
    if ((initial_rank && *initial_rank < 1) || (updated_rank && *updated_rank < 1))
        throw ParseError("record " + query_id + ": ranks are 1-based");
}

double average_precision(std::span<const int> relevance) {
    if (relevance.empty()) throw ContractViolation("average precision of an empty ranking");
    std::size_t hits = 0;
    double sum = 0.0;
    for (std::size_t i = 0; i < relevance.size(); ++i) {
        if (!relevance[i]) continue;
        ++hits;
        sum += static_cast<double>(hits) / static_cast<double>(i + 1);
    }
    return hits ? sum / static_cast<double>(hits) : 0.0;
}

double mean_average_precision(std::span<const AnnotationRecord> records) {
    require_records(records);
    double sum = 0.0;
    for (const auto& r : records) sum += average_precision(r.relevance_vector());
    return sum / static_cast<double>(records.size());
}

double mean_reciprocal_rank(std::span<const AnnotationRecord> records) {
    require_records(records);
    double sum = 0.0;
    for (const auto& r : records) {
        const auto rel = r.relevance_vector();
        auto it = std::find(rel.begin(), rel.end(), 1);
        if (it != rel.end()) sum += 1.0 / static_cast<double>(it - rel.begin() + 1);
    }
    return sum / static_cast<double>(records.size());
}

double precision_at_k(std::span<const AnnotationRecord> records, std::size_t k) {
    require_records(records);
    if (k == 0) throw ContractViolation("precision@k needs k >= 1");
    double sum = 0.0;
    for (const auto& r : records) {
        const auto rel = r.relevance_vector();
        const std::size_t cutoff = std::min(k, rel.size());
        const auto relevant = std::count(rel.begin(), rel.begin() + static_cast<std::ptrdiff_t>(cutoff), 1);
        sum += static_cast<double>(relevant) / static_cast<double>(cutoff);
    }
    return sum / static_cast<double>(records.size());
}

double hits_at_k(std::span<const AnnotationRecord> records, std::size_t k) {
    require_records(records);
    if (k == 0) throw ContractViolation("hits@k needs k >= 1");
    std::size_t hits = 0;
    for (const auto& r : records) {
        const std::size_t rank = first_relevant_rank(r);
        if (rank != 0 && rank <= k) ++hits;
    }
    return static_cast<double>(hits) / static_cast<double>(records.size());
}

std::optional<RankDeltaSummary> summarize_rank_deltas(std::span<const AnnotationRecord> records) {
    std::vector<long> deltas;
    for (const auto& r : records)
        if (r.initial_rank && r.updated_rank) deltas.push_back(*r.initial_rank - *r.updated_rank);
    if (deltas.empty()) return std::nullopt;

    RankDeltaSummary s;
    s.count = deltas.size();
    double sum = 0.0;
    for (long d : deltas) sum += static_cast<double>(d);
    s.mean = sum / static_cast<double>(s.count);
    if (s.count > 1) {
        double sq = 0.0;
        for (long d : deltas) sq += (static_cast<double>(d) - s.mean) * (static_cast<double>(d) - s.mean);
        s.stddev = std::sqrt(sq / static_cast<double>(s.count - 1));
    }
    const auto [lo, hi] = std::minmax_element(deltas.begin(), deltas.end());
    s.min = *lo;
    s.max = *hi;
    return s;
}

std::vector<AnnotationRecord> parse_annotations(std::string_view text) {
    std::vector<AnnotationRecord> records;
    std::size_t line_no = 0;
    std::size_t start = 0;
    while (start <= text.size()) {
        const auto end = std::min(text.find('\n', start), text.size());
        const std::string_view line = text.substr(start, end - start);
        start = end + 1;
        ++line_no;
        if (line.find_first_not_of(" \t\r") == std::string_view::npos) continue;

        json doc;
        try {
            doc = json::parse(line);
        } catch (const json::exception& e) {
            throw ParseError(std::string("invalid JSON: ") + e.what(), line_no);
        }
        AnnotationRecord record;
        try {
            record = doc.get<AnnotationRecord>();
            record.validate();
        } catch (const ParseError& e) {
            throw ParseError(e.what(), line_no);
        } catch (const std::exception& e) {
            throw ParseError(e.what(), line_no);
        }
        records.push_back(std::move(record));
    }
    if (records.empty()) throw ParseError("annotation file holds no records");
    return records;
}

std::vector<AnnotationRecord> load_annotations(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw NotFoundError("cannot read annotations " + path.string());
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return parse_annotations(buffer.str());
}

MetricsReport compute_metrics(std::span<const AnnotationRecord> records, const EvalConfig& config) {
    require_records(records);
    MetricsReport report;
    report.n_queries = records.size();
    report.map = mean_average_precision(records);
    report.mrr = mean_reciprocal_rank(records);
    for (auto k : config.precision_ks) report.p_at_k[k] = precision_at_k(records, k);
    for (auto k : config.hits_ks) report.hits_at_k[k] = hits_at_k(records, k);
    report.rank_delta = summarize_rank_deltas(records);
    return report;
}

MetricsReport evaluate_run(const std::filesystem::path& annotations, const EvalConfig& config) {
    return compute_metrics(load_annotations(annotations), config);
}

std::string render_metrics_json(const MetricsReport& report) { return json(report).dump(2) + "\n"; }

std::string render_metrics_table(const MetricsReport& report) {
    std::string out = fmt::format("{:<10} {}\n", "queries", report.n_queries);
    out += fmt::format("{:<10} {:.4f}\n", "MAP", report.map);
    out += fmt::format("{:<10} {:.4f}\n", "MRR", report.mrr);
    for (const auto& [k, v] : report.p_at_k) out += fmt::format("{:<10} {:.4f}\n", fmt::format("P@{}", k), v);
    for (const auto& [k, v] : report.hits_at_k) out += fmt::format("{:<10} {:.4f}\n", fmt::format("HITS@{}", k), v);
    if (report.rank_delta) {
        const auto& d = *report.rank_delta;
        out += fmt::format("{:<10} {:+.2f} (SD {:.2f}, min {}, max {}, n={})\n", "rank delta", d.mean, d.stddev,
                           d.min, d.max, d.count);
    }
    return out;
}

}  // namespace elicit
