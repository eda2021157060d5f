#include "priornet/eval.hpp"

#include <algorithm>
#include <numeric>
#include <random>

namespace priornet {

namespace {

const char* const kMeasureNames[] = {"max_prob", "entropy", "mutual_information",
                                     "differential_entropy"};

bool has_measure(const UncertaintyScores& s, const std::string& measure) {
  if (measure == "max_prob" || measure == "entropy") return true;
  if (measure == "mutual_information") return s.mutual_information.has_value();
  if (measure == "differential_entropy") return s.differential_entropy.has_value();
  return false;
}

DetectionReport report_from_scored(
    const std::vector<std::string>& measures,
    const std::vector<std::vector<ScoredExample>>& per_measure_examples) {
  DetectionReport report;
  for (std::size_t m = 0; m < measures.size(); ++m) {
    MeasureMetrics metrics;
    metrics.auroc = auroc(per_measure_examples[m]);
    metrics.aupr = aupr(per_measure_examples[m]);
    report.measures.emplace_back(measures[m], metrics);
  }
  return report;
}

}  // namespace

double auroc(std::span<const ScoredExample> examples) {
  std::size_t num_pos = 0;
  for (const ScoredExample& e : examples) num_pos += e.is_positive ? 1 : 0;
  const std::size_t num_neg = examples.size() - num_pos;
  if (num_pos == 0 || num_neg == 0) {
    throw std::invalid_argument("auroc: need at least one positive and one negative");
  }

  std::vector<std::size_t> order(examples.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return examples[a].score < examples[b].score;
  });

  // Rank sum of positives with midranks over tie groups.
  double pos_rank_sum = 0.0;
  std::size_t i = 0;
  while (i < order.size()) {
    std::size_t j = i;
    std::size_t group_pos = 0;
    while (j < order.size() && examples[order[j]].score == examples[order[i]].score) {
      group_pos += examples[order[j]].is_positive ? 1 : 0;
      ++j;
    }
    const double midrank = 0.5 * static_cast<double>(i + 1 + j);  // ranks are 1-based
    pos_rank_sum += midrank * static_cast<double>(group_pos);
    i = j;
  }
  const double p = static_cast<double>(num_pos);
  const double u = pos_rank_sum - p * (p + 1.0) / 2.0;
  return u / (p * static_cast<double>(num_neg));
}

double aupr(std::span<const ScoredExample> examples) {
  std::size_t num_pos = 0;
  for (const ScoredExample& e : examples) num_pos += e.is_positive ? 1 : 0;
  if (num_pos == 0) {
    throw std::invalid_argument("aupr: need at least one positive");
  }

  std::vector<std::size_t> order(examples.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return examples[a].score > examples[b].score;
  });

  // Average precision, walking tie groups in descending score order; the
  // precision at the end of a group applies to all its positives.
  double ap_sum = 0.0;
  std::size_t seen = 0;
  std::size_t seen_pos = 0;
  std::size_t i = 0;
  while (i < order.size()) {
    std::size_t j = i;
    std::size_t group_pos = 0;
    while (j < order.size() && examples[order[j]].score == examples[order[i]].score) {
      group_pos += examples[order[j]].is_positive ? 1 : 0;
      ++j;
    }
    seen += j - i;
    seen_pos += group_pos;
    const double precision = static_cast<double>(seen_pos) / static_cast<double>(seen);
    ap_sum += precision * static_cast<double>(group_pos);
    i = j;
  }
  return ap_sum / static_cast<double>(num_pos);
}

std::vector<std::string> available_measures(std::span<const UncertaintyScores> scores) {
  std::vector<std::string> result;
  for (const char* name : kMeasureNames) {
    bool everywhere = !scores.empty();
    for (const UncertaintyScores& s : scores) {
      if (!has_measure(s, name)) {
        everywhere = false;
        break;
      }
    }
    if (everywhere) result.emplace_back(name);
  }
  return result;
}

double measure_value(const UncertaintyScores& scores, const std::string& measure) {
  if (measure == "max_prob") return -scores.max_prob;  // ascending with uncertainty
  if (measure == "entropy") return scores.entropy;
  if (measure == "mutual_information") return scores.mutual_information.value();
  if (measure == "differential_entropy") return scores.differential_entropy.value();
  throw std::invalid_argument("unknown measure: " + measure);
}

DetectionReport misclassification_detection(std::span<const UncertaintyScores> scores,
                                            std::span<const int> predicted,
                                            std::span<const int> labels) {
  if (scores.size() != predicted.size() || scores.size() != labels.size() || scores.empty()) {
    throw std::invalid_argument("misclassification_detection: input sizes disagree or are empty");
  }
  std::size_t wrong = 0;
  for (std::size_t i = 0; i < scores.size(); ++i) {
    wrong += predicted[i] != labels[i] ? 1 : 0;
  }
  const double error_rate = static_cast<double>(wrong) / static_cast<double>(scores.size());
  if (wrong == 0 || wrong == scores.size()) {
    throw DetectionError("misclassification_detection: degenerate input (error rate " +
                             std::to_string(error_rate) + ")",
                         error_rate);
  }

  const std::vector<std::string> measures = available_measures(scores);
  std::vector<std::vector<ScoredExample>> per_measure(measures.size());
  for (std::size_t m = 0; m < measures.size(); ++m) {
    per_measure[m].reserve(scores.size());
    for (std::size_t i = 0; i < scores.size(); ++i) {
      per_measure[m].push_back(
          {measure_value(scores[i], measures[m]), predicted[i] != labels[i]});
    }
  }
  DetectionReport report = report_from_scored(measures, per_measure);
  report.num_positives = wrong;
  report.num_negatives = scores.size() - wrong;
  report.error_rate = error_rate;
  return report;
}

DetectionReport ood_detection(std::span<const UncertaintyScores> in_scores,
                              std::span<const UncertaintyScores> out_scores, bool balanced,
                              std::uint64_t seed) {
  if (in_scores.empty() || out_scores.empty()) {
    throw std::invalid_argument("ood_detection: both score sets must be non-empty");
  }

  std::vector<std::size_t> in_idx(in_scores.size());
  std::vector<std::size_t> out_idx(out_scores.size());
  std::iota(in_idx.begin(), in_idx.end(), 0);
  std::iota(out_idx.begin(), out_idx.end(), 0);
  if (balanced && in_idx.size() != out_idx.size()) {
    std::mt19937_64 rng(seed);
    std::vector<std::size_t>& larger = in_idx.size() > out_idx.size() ? in_idx : out_idx;
    const std::size_t target = std::min(in_idx.size(), out_idx.size());
    std::shuffle(larger.begin(), larger.end(), rng);
    larger.resize(target);
  }

  std::vector<UncertaintyScores> all;
  all.reserve(in_idx.size() + out_idx.size());
  for (std::size_t i : in_idx) all.push_back(in_scores[i]);
  for (std::size_t i : out_idx) all.push_back(out_scores[i]);

  const std::vector<std::string> measures = available_measures(all);
  std::vector<std::vector<ScoredExample>> per_measure(measures.size());
  for (std::size_t m = 0; m < measures.size(); ++m) {
    per_measure[m].reserve(all.size());
    for (std::size_t i = 0; i < all.size(); ++i) {
      per_measure[m].push_back({measure_value(all[i], measures[m]), i >= in_idx.size()});
    }
  }
  DetectionReport report = report_from_scored(measures, per_measure);
  report.num_positives = out_idx.size();
  report.num_negatives = in_idx.size();
  return report;
}

}  // namespace priornet
