#include "priornet/data.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <numbers>
#include <random>
#include <stdexcept>
#include <string>

#include "priornet/errors.hpp"

namespace priornet {

namespace {

constexpr double kEquidistanceTolerance = 1e-9;

std::string format_double(double v) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

// Splits one CSV line; returns fields and their 1-based starting columns.
std::vector<std::pair<std::string, std::size_t>> split_csv_line(const std::string& line) {
  std::vector<std::pair<std::string, std::size_t>> fields;
  std::size_t start = 0;
  while (true) {
    const std::size_t comma = line.find(',', start);
    if (comma == std::string::npos) {
      fields.emplace_back(line.substr(start), start + 1);
      break;
    }
    fields.emplace_back(line.substr(start, comma - start), start + 1);
    start = comma + 1;
  }
  return fields;
}

double parse_double_field(const std::string& field, std::size_t line, std::size_t column) {
  double value = 0.0;
  const char* begin = field.data();
  const char* end = begin + field.size();
  const auto res = std::from_chars(begin, end, value);
  if (res.ec != std::errc() || res.ptr != end || field.empty()) {
    throw ParseError("expected a number, got '" + field + "'", line, column);
  }
  if (!std::isfinite(value)) {
    throw ParseError("non-finite feature value '" + field + "'", line, column);
  }
  return value;
}

int parse_label_field(const std::string& field, std::size_t line, std::size_t column) {
  int value = 0;
  const char* begin = field.data();
  const char* end = begin + field.size();
  const auto res = std::from_chars(begin, end, value);
  if (res.ec != std::errc() || res.ptr != end || field.empty() || value < 0) {
    throw ParseError("expected a non-negative integer label, got '" + field + "'", line, column);
  }
  return value;
}

// Header must be x0..x{D-1}, optionally followed by "label".
std::size_t parse_header(const std::string& line, bool labeled) {
  const auto fields = split_csv_line(line);
  const std::size_t feature_count = labeled ? fields.size() - 1 : fields.size();
  if (labeled && (fields.empty() || fields.back().first != "label")) {
    throw ParseError("expected final header column 'label'", 1,
                     fields.empty() ? 1 : fields.back().second);
  }
  if (feature_count == 0) {
    throw ParseError("header has no feature columns", 1, 1);
  }
  for (std::size_t i = 0; i < feature_count; ++i) {
    if (fields[i].first != "x" + std::to_string(i)) {
      throw ParseError("expected header column 'x" + std::to_string(i) + "', got '" +
                           fields[i].first + "'",
                       1, fields[i].second);
    }
  }
  return feature_count;
}

std::ifstream open_for_read(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw std::runtime_error("cannot open dataset: " + path.string());
  }
  return in;
}

std::ofstream open_for_write(const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) {
    throw std::runtime_error("cannot write dataset: " + path.string());
  }
  return out;
}

}  // namespace

GaussianMixtureSpec::GaussianMixtureSpec(std::vector<std::array<double, 2>> class_means,
                                         double stddev, std::size_t samples_per_class)
    : means(std::move(class_means)), sigma(stddev), per_class(samples_per_class) {
  if (means.size() < 2) {
    throw std::invalid_argument("GaussianMixtureSpec: need at least 2 classes");
  }
  if (!(sigma > 0.0) || !std::isfinite(sigma)) {
    throw std::invalid_argument("GaussianMixtureSpec: sigma must be positive");
  }
  double reference = -1.0;
  for (std::size_t i = 0; i < means.size(); ++i) {
    for (std::size_t j = i + 1; j < means.size(); ++j) {
      const double dx = means[i][0] - means[j][0];
      const double dy = means[i][1] - means[j][1];
      const double dist = std::hypot(dx, dy);
      if (reference < 0.0) {
        reference = dist;
      } else if (std::abs(dist - reference) > kEquidistanceTolerance) {
        throw std::invalid_argument("GaussianMixtureSpec: class means are not equidistant");
      }
    }
  }
}

GaussianMixtureSpec GaussianMixtureSpec::equilateral(double radius, double stddev,
                                                     std::size_t samples_per_class) {
  std::vector<std::array<double, 2>> means;
  for (int i = 0; i < 3; ++i) {
    const double angle = (90.0 + 120.0 * i) * std::numbers::pi / 180.0;
    means.push_back({radius * std::cos(angle), radius * std::sin(angle)});
  }
  return GaussianMixtureSpec(std::move(means), stddev, samples_per_class);
}

LabeledDataset generate_gaussian_classes(const GaussianMixtureSpec& spec, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> noise(0.0, spec.sigma);
  LabeledDataset data;
  data.num_classes = static_cast<int>(spec.num_classes());
  data.features.reserve(spec.num_classes() * spec.per_class);
  data.labels.reserve(spec.num_classes() * spec.per_class);
  for (std::size_t c = 0; c < spec.num_classes(); ++c) {
    for (std::size_t i = 0; i < spec.per_class; ++i) {
      data.features.push_back({spec.means[c][0] + noise(rng), spec.means[c][1] + noise(rng)});
      data.labels.push_back(static_cast<int>(c));
    }
  }
  return data;
}

std::vector<double> true_posterior(const GaussianMixtureSpec& spec,
                                   const std::array<double, 2>& x) {
  // Equal priors: posterior ~ exp(-|x - m_c|^2 / (2 sigma^2)), via logsumexp.
  std::vector<double> log_lik(spec.num_classes());
  double max_ll = -std::numeric_limits<double>::infinity();
  for (std::size_t c = 0; c < spec.num_classes(); ++c) {
    const double dx = x[0] - spec.means[c][0];
    const double dy = x[1] - spec.means[c][1];
    log_lik[c] = -(dx * dx + dy * dy) / (2.0 * spec.sigma * spec.sigma);
    max_ll = std::max(max_ll, log_lik[c]);
  }
  double sum = 0.0;
  for (double& ll : log_lik) {
    ll = std::exp(ll - max_ll);
    sum += ll;
  }
  for (double& ll : log_lik) ll /= sum;
  return log_lik;
}

double true_posterior_entropy(const GaussianMixtureSpec& spec, const std::array<double, 2>& x) {
  double h = 0.0;
  for (double p : true_posterior(spec, x)) {
    if (p > 0.0) h -= p * std::log(p);
  }
  return h;
}

UnlabeledDataset sample_ood_annulus(double inner_radius, double outer_radius, std::size_t n,
                                    std::uint64_t seed) {
  if (!(0.0 < inner_radius && inner_radius < outer_radius)) {
    throw std::invalid_argument("sample_ood_annulus: need 0 < inner < outer");
  }
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> uniform(0.0, 1.0);
  const double inner_sq = inner_radius * inner_radius;
  const double outer_sq = outer_radius * outer_radius;
  UnlabeledDataset data;
  data.features.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    // Area-uniform radius: inverse CDF of r on [inner, outer].
    const double r = std::sqrt(inner_sq + uniform(rng) * (outer_sq - inner_sq));
    const double theta = 2.0 * std::numbers::pi * uniform(rng);
    data.features.push_back({r * std::cos(theta), r * std::sin(theta)});
  }
  return data;
}

UnlabeledDataset grid_points(std::pair<double, double> x_range, std::pair<double, double> y_range,
                             std::size_t resolution) {
  if (resolution < 2) {
    throw std::invalid_argument("grid_points: resolution must be >= 2");
  }
  const double x_step = (x_range.second - x_range.first) / static_cast<double>(resolution - 1);
  const double y_step = (y_range.second - y_range.first) / static_cast<double>(resolution - 1);
  UnlabeledDataset data;
  data.features.reserve(resolution * resolution);
  for (std::size_t iy = 0; iy < resolution; ++iy) {
    const double y = y_range.first + static_cast<double>(iy) * y_step;
    for (std::size_t ix = 0; ix < resolution; ++ix) {
      const double x = x_range.first + static_cast<double>(ix) * x_step;
      data.features.push_back({x, y});
    }
  }
  return data;
}

void save_dataset(const LabeledDataset& dataset, const std::filesystem::path& path) {
  std::ofstream out = open_for_write(path);
  for (std::size_t d = 0; d < dataset.dim(); ++d) {
    out << (d == 0 ? "" : ",") << "x" << d;
  }
  out << ",label\n";
  for (std::size_t i = 0; i < dataset.size(); ++i) {
    for (std::size_t d = 0; d < dataset.dim(); ++d) {
      out << (d == 0 ? "" : ",") << format_double(dataset.features[i][d]);
    }
    out << ',' << dataset.labels[i] << '\n';
  }
}

void save_dataset(const UnlabeledDataset& dataset, const std::filesystem::path& path) {
  std::ofstream out = open_for_write(path);
  for (std::size_t d = 0; d < dataset.dim(); ++d) {
    out << (d == 0 ? "" : ",") << "x" << d;
  }
  out << '\n';
  for (std::size_t i = 0; i < dataset.size(); ++i) {
    for (std::size_t d = 0; d < dataset.dim(); ++d) {
      out << (d == 0 ? "" : ",") << format_double(dataset.features[i][d]);
    }
    out << '\n';
  }
}

LabeledDataset load_dataset(const std::filesystem::path& path) {
  std::ifstream in = open_for_read(path);
  std::string line;
  if (!std::getline(in, line)) {
    throw ParseError("empty dataset file", 1, 1);
  }
  const std::size_t dim = parse_header(line, /*labeled=*/true);

  LabeledDataset data;
  int max_label = -1;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    const auto fields = split_csv_line(line);
    if (fields.size() != dim + 1) {
      throw ParseError("expected " + std::to_string(dim + 1) + " fields, got " +
                           std::to_string(fields.size()),
                       line_no, 1);
    }
    std::vector<double> row(dim);
    for (std::size_t d = 0; d < dim; ++d) {
      row[d] = parse_double_field(fields[d].first, line_no, fields[d].second);
    }
    data.features.push_back(std::move(row));
    const int label = parse_label_field(fields[dim].first, line_no, fields[dim].second);
    max_label = std::max(max_label, label);
    data.labels.push_back(label);
  }
  if (data.features.empty()) {
    throw ParseError("dataset has a header but no rows", line_no, 1);
  }
  data.num_classes = max_label + 1;
  return data;
}

UnlabeledDataset load_unlabeled_dataset(const std::filesystem::path& path) {
  std::ifstream in = open_for_read(path);
  std::string line;
  if (!std::getline(in, line)) {
    throw ParseError("empty dataset file", 1, 1);
  }
  const std::size_t dim = parse_header(line, /*labeled=*/false);

  UnlabeledDataset data;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    const auto fields = split_csv_line(line);
    if (fields.size() != dim) {
      throw ParseError("expected " + std::to_string(dim) + " fields, got " +
                           std::to_string(fields.size()),
                       line_no, 1);
    }
    std::vector<double> row(dim);
    for (std::size_t d = 0; d < dim; ++d) {
      row[d] = parse_double_field(fields[d].first, line_no, fields[d].second);
    }
    data.features.push_back(std::move(row));
  }
  if (data.features.empty()) {
    throw ParseError("dataset has a header but no rows", line_no, 1);
  }
  return data;
}

}  // namespace priornet
