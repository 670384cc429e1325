#pragma once

#include <span>
#include <string>
#include <vector>

namespace tilesift {

enum class AggregationMethod { average, majority };

AggregationMethod parse_method(const std::string& s);
std::string method_name(AggregationMethod m);

// Arithmetic mean of tile probabilities.
double average_probability(std::span<const double> probs);

// Fraction of tiles voting for the artist; a tile at exactly 0.5 counts as
// a vote for.
double majority_vote(std::span<const double> probs);

double aggregate(std::span<const double> probs, AggregationMethod method);

// Attributed iff score >= boundary (tie at the boundary is attributed).
bool classify(double score, double boundary = 0.5);

// Population variance of tile probabilities for one image.
double tile_variance(std::span<const double> probs);

// Test-set consistency metric: mean of per-image variances.
double mean_variance(std::span<const double> per_image_variances);

struct LabeledScore {
    std::string image_id;
    int label = 0;
    double score = 0.0;
};

// Average L1 distance from the decision boundary over misclassified images
// only; zero when nothing is misclassified.
struct ErrorReport {
    struct Miss {
        std::string image_id;
        double prob = 0.0;
    };
    std::vector<Miss> misclassified;
    double mean_error = 0.0;  // E
    double accuracy = 1.0;
    std::size_t total = 0;
};

ErrorReport classification_error(const std::vector<LabeledScore>& results,
                                 double boundary = 0.5);

// Convex weights over scales: w_k >= 0, sum w_k = 1 (within 1e-9).
struct WeightVector {
    std::vector<double> weights;
};

void validate_weights(const WeightVector& w);

// phi(x) = sum_k w_k * phi_k(x). Scores must align with the weights.
double combine_scales(std::span<const double> per_scale_scores, const WeightVector& w);

// Exhaustive search over the weight simplex discretized at grid_step.
// Objective is lexicographic: maximize accuracy, then minimize E; remaining
// ties go to the weight vector closest to uniform, then to the earliest
// point in composition enumeration order.
WeightVector optimize_weights(const std::vector<std::vector<double>>& per_image_scale_scores,
                              const std::vector<int>& labels,
                              double grid_step = 0.01, double boundary = 0.5);

}  // namespace tilesift
