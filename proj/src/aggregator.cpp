#include "tilesift/aggregator.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "tilesift/util.hpp"

namespace tilesift {

AggregationMethod parse_method(const std::string& s) {
    if (s == "average") return AggregationMethod::average;
    if (s == "majority") return AggregationMethod::majority;
    throw std::invalid_argument("unknown aggregation method '" + s +
                                "' (expected average or majority)");
}

std::string method_name(AggregationMethod m) {
    return m == AggregationMethod::average ? "average" : "majority";
}

double average_probability(std::span<const double> probs) {
    if (probs.empty()) {
        throw std::invalid_argument("average_probability: empty probability vector");
    }
    double sum = 0.0;
    for (double p : probs) sum += p;
    return sum / static_cast<double>(probs.size());
}

double majority_vote(std::span<const double> probs) {
    if (probs.empty()) {
        throw std::invalid_argument("majority_vote: empty probability vector");
    }
    std::size_t votes = 0;
    for (double p : probs) {
        if (p >= 0.5) ++votes;
    }
    return static_cast<double>(votes) / static_cast<double>(probs.size());
}

double aggregate(std::span<const double> probs, AggregationMethod method) {
    return method == AggregationMethod::average ? average_probability(probs)
                                                : majority_vote(probs);
}

bool classify(double score, double boundary) {
    return score >= boundary;
}

double tile_variance(std::span<const double> probs) {
    if (probs.empty()) {
        throw std::invalid_argument("tile_variance: empty probability vector");
    }
    double mean = average_probability(probs);
    double acc = 0.0;
    for (double p : probs) {
        double d = p - mean;
        acc += d * d;
    }
    return acc / static_cast<double>(probs.size());
}

double mean_variance(std::span<const double> per_image_variances) {
    if (per_image_variances.empty()) {
        throw std::invalid_argument("mean_variance: empty input");
    }
    return average_probability(per_image_variances);
}

ErrorReport classification_error(const std::vector<LabeledScore>& results, double boundary) {
    if (results.empty()) {
        throw std::invalid_argument("classification_error: empty results");
    }
    ErrorReport report;
    report.total = results.size();
    double err_sum = 0.0;
    for (const LabeledScore& r : results) {
        bool predicted = classify(r.score, boundary);
        if (predicted != (r.label == 1)) {
            report.misclassified.push_back({r.image_id, r.score});
            err_sum += std::abs(boundary - r.score);
        }
    }
    std::size_t n = report.misclassified.size();
    report.mean_error = n == 0 ? 0.0 : err_sum / static_cast<double>(n);
    report.accuracy =
        static_cast<double>(report.total - n) / static_cast<double>(report.total);
    return report;
}

void validate_weights(const WeightVector& w) {
    if (w.weights.empty()) {
        throw std::invalid_argument("weights: empty");
    }
    double sum = 0.0;
    for (double x : w.weights) {
        if (x < 0.0) throw std::invalid_argument("weights: negative entry " + fmt_double(x));
        sum += x;
    }
    if (std::abs(sum - 1.0) > 1e-9) {
        throw std::invalid_argument("weights: sum " + fmt_double(sum) + " is not 1");
    }
}

double combine_scales(std::span<const double> per_scale_scores, const WeightVector& w) {
    validate_weights(w);
    if (per_scale_scores.size() != w.weights.size()) {
        throw std::invalid_argument("combine_scales: " + std::to_string(per_scale_scores.size()) +
                                    " scores vs " + std::to_string(w.weights.size()) +
                                    " weights");
    }
    double score = 0.0;
    for (std::size_t k = 0; k < w.weights.size(); ++k) {
        score += w.weights[k] * per_scale_scores[k];
    }
    return score;
}

namespace {

// Enumerates integer compositions of `units` into `k` parts, earlier parts
// taking the largest share first, so residual ties fall to the
// lowest-indexed scale.
template <typename Fn>
void for_each_composition(int units, int k, std::vector<int>& parts, int depth, Fn&& fn) {
    if (depth == k - 1) {
        parts[depth] = units;
        fn(parts);
        return;
    }
    for (int c = units; c >= 0; --c) {
        parts[depth] = c;
        for_each_composition(units - c, k, parts, depth + 1, fn);
    }
}

double distance_to_uniform(const std::vector<int>& parts, int units) {
    double u = 1.0 / static_cast<double>(parts.size());
    double acc = 0.0;
    for (int c : parts) {
        double d = static_cast<double>(c) / units - u;
        acc += d * d;
    }
    return acc;
}

}  // namespace

WeightVector optimize_weights(const std::vector<std::vector<double>>& per_image_scale_scores,
                              const std::vector<int>& labels, double grid_step,
                              double boundary) {
    if (per_image_scale_scores.empty() || per_image_scale_scores.size() != labels.size()) {
        throw std::invalid_argument("optimize_weights: scores and labels must be nonempty "
                                    "and aligned");
    }
    const std::size_t n_scales = per_image_scale_scores.front().size();
    for (const auto& row : per_image_scale_scores) {
        if (row.size() != n_scales) {
            throw std::invalid_argument("optimize_weights: ragged score rows");
        }
    }
    if (n_scales == 0) {
        throw std::invalid_argument("optimize_weights: no scales");
    }
    if (n_scales == 1) {
        return WeightVector{{1.0}};
    }
    if (!(grid_step > 0.0 && grid_step <= 1.0)) {
        throw std::invalid_argument("optimize_weights: grid step must be in (0, 1]");
    }
    int units = round_half_up(1.0 / grid_step);
    if (units < 1) units = 1;

    struct Candidate {
        double accuracy = -1.0;
        double mean_error = 0.0;
        double dist_uniform = 0.0;
        std::vector<int> parts;
    } best;

    std::vector<int> parts(n_scales, 0);
    for_each_composition(units, static_cast<int>(n_scales), parts, 0,
                         [&](const std::vector<int>& cand) {
        std::size_t correct = 0;
        double err_sum = 0.0;
        std::size_t n_wrong = 0;
        for (std::size_t i = 0; i < per_image_scale_scores.size(); ++i) {
            double score = 0.0;
            const auto& row = per_image_scale_scores[i];
            for (std::size_t k = 0; k < n_scales; ++k) {
                score += (static_cast<double>(cand[k]) / units) * row[k];
            }
            if (classify(score, boundary) == (labels[i] == 1)) {
                ++correct;
            } else {
                ++n_wrong;
                err_sum += std::abs(boundary - score);
            }
        }
        double accuracy = static_cast<double>(correct) /
                          static_cast<double>(per_image_scale_scores.size());
        double mean_error = n_wrong == 0 ? 0.0 : err_sum / static_cast<double>(n_wrong);
        double dist = distance_to_uniform(cand, units);

        // Lexicographic objective; the composition enumeration order itself
        // is the final tie-break (the incumbent wins all remaining ties).
        bool better = false;
        if (accuracy > best.accuracy) {
            better = true;
        } else if (accuracy == best.accuracy) {
            if (mean_error < best.mean_error) {
                better = true;
            } else if (mean_error == best.mean_error && dist < best.dist_uniform) {
                better = true;
            }
        }
        if (better) {
            best = {accuracy, mean_error, dist, cand};
        }
    });

    WeightVector w;
    w.weights.resize(n_scales);
    for (std::size_t k = 0; k < n_scales; ++k) {
        w.weights[k] = static_cast<double>(best.parts[k]) / units;
    }
    return w;
}

}  // namespace tilesift
