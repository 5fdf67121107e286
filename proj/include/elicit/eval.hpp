#pragma once

#include <cstddef>
#include <filesystem>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace elicit {

// One judged ranking. `selected_rank` marks the single relevant item of an
// aspect-GUI judgment; otherwise relevance comes from the `relevance` map and
// unjudged items count as irrelevant.
struct AnnotationRecord {
    std::string query_id;
    std::vector<std::string> ranked_item_ids;
    std::map<std::string, int> relevance;
    std::optional<std::size_t> selected_rank;
    // Reranking studies: rank of the chosen GUI before and after reranking.
    std::optional<long> initial_rank;
    std::optional<long> updated_rank;

    // Binary relevance by position of ranked_item_ids.
    std::vector<int> relevance_vector() const;
    void validate() const;  // throws ParseError

    bool operator==(const AnnotationRecord&) const = default;
};

// Mean over relevant positions i of (relevant items in 1..i) / i; 0 without
// relevant items. Throws ContractViolation for an empty list.
double average_precision(std::span<const int> relevance);

double mean_average_precision(std::span<const AnnotationRecord> records);
// First relevant rank r contributes 1/r, a record without one contributes 0.
double mean_reciprocal_rank(std::span<const AnnotationRecord> records);
// Relevant items within the first min(k, n) positions divided by min(k, n).
double precision_at_k(std::span<const AnnotationRecord> records, std::size_t k);
// Fraction of records whose first relevant rank (selected_rank when given)
// is at most k.
double hits_at_k(std::span<const AnnotationRecord> records, std::size_t k);

struct RankDeltaSummary {
    std::size_t count = 0;
    double mean = 0.0;
    double stddev = 0.0;  // sample standard deviation
    long min = 0;
    long max = 0;

    bool operator==(const RankDeltaSummary&) const = default;
};

// initial_rank - updated_rank over records carrying both.
std::optional<RankDeltaSummary> summarize_rank_deltas(std::span<const AnnotationRecord> records);

struct EvalConfig {
    std::vector<std::size_t> precision_ks{1, 5, 10};
    std::vector<std::size_t> hits_ks{1, 5, 10, 15};
};

struct MetricsReport {
    std::size_t n_queries = 0;
    double map = 0.0;
    double mrr = 0.0;
    std::map<std::size_t, double> p_at_k;
    std::map<std::size_t, double> hits_at_k;
    std::optional<RankDeltaSummary> rank_delta;

    bool operator==(const MetricsReport&) const = default;
};

// JSON lines, one record per non-blank line. Throws ParseError carrying the
// line number; an empty file is an error.
std::vector<AnnotationRecord> load_annotations(const std::filesystem::path& path);
std::vector<AnnotationRecord> parse_annotations(std::string_view text);

MetricsReport compute_metrics(std::span<const AnnotationRecord> records, const EvalConfig& config = {});
MetricsReport evaluate_run(const std::filesystem::path& annotations, const EvalConfig& config = {});

std::string render_metrics_json(const MetricsReport& report);
std::string render_metrics_table(const MetricsReport& report);

}  // namespace elicit
