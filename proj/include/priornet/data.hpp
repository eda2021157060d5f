#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <utility>
#include <vector>

namespace priornet {

struct LabeledDataset {
  std::vector<std::vector<double>> features;
  std::vector<int> labels;
  int num_classes = 0;

  std::size_t size() const { return features.size(); }
  std::size_t dim() const { return features.empty() ? 0 : features.front().size(); }
};

struct UnlabeledDataset {
  std::vector<std::vector<double>> features;

  std::size_t size() const { return features.size(); }
  std::size_t dim() const { return features.empty() ? 0 : features.front().size(); }
};

/// K Gaussian classes in the plane with equidistant means on a circle and a
/// shared isotropic standard deviation. Default layout puts 3 means at
/// angles 90, 210 and 330 degrees.
struct GaussianMixtureSpec {
  std::vector<std::array<double, 2>> means;
  double sigma = 1.0;
  std::size_t per_class = 1000;

  GaussianMixtureSpec(std::vector<std::array<double, 2>> class_means, double stddev,
                      std::size_t samples_per_class);

  /// 3 means on a circle of the given radius, pairwise equidistant.
  static GaussianMixtureSpec equilateral(double radius, double stddev,
                                         std::size_t samples_per_class);

  std::size_t num_classes() const { return means.size(); }
};

/// n points per class from N(mean_c, sigma^2 I), class blocks in order,
/// bit-identical for a fixed seed.
LabeledDataset generate_gaussian_classes(const GaussianMixtureSpec& spec, std::uint64_t seed);

/// Entropy (nats) of the exact Bayes posterior over classes at x, assuming
/// equal class priors.
double true_posterior_entropy(const GaussianMixtureSpec& spec, const std::array<double, 2>& x);

/// Bayes posterior itself (exposed for decision-boundary diagnostics).
std::vector<double> true_posterior(const GaussianMixtureSpec& spec, const std::array<double, 2>& x);

/// n points uniform by area on the annulus inner <= r <= outer.
UnlabeledDataset sample_ood_annulus(double inner_radius, double outer_radius, std::size_t n,
                                    std::uint64_t seed);

/// Row-major lattice of resolution^2 points spanning both ranges inclusive;
/// y varies over rows (outer loop), x over columns.
UnlabeledDataset grid_points(std::pair<double, double> x_range, std::pair<double, double> y_range,
                             std::size_t resolution);

/// CSV with header "x0,...,x{D-1},label"; features round-trip exactly
/// (shortest representation that parses back to the same double).
void save_dataset(const LabeledDataset& dataset, const std::filesystem::path& path);
LabeledDataset load_dataset(const std::filesystem::path& path);

/// Same format minus the label column.
void save_dataset(const UnlabeledDataset& dataset, const std::filesystem::path& path);
UnlabeledDataset load_unlabeled_dataset(const std::filesystem::path& path);

}  // namespace priornet
