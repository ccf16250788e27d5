#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "colorlit/corpus.hpp"
#include "colorlit/embed.hpp"
#include "colorlit/extract.hpp"

namespace colorlit {

struct CorrelationResult {
  std::size_t n = 0;
  double r = 0.0;
  double t = 0.0;
  double p = 1.0;
  std::string stars;
};

enum class Era { Pre1800, Mid, Post1900 };

inline constexpr Era kEras[] = {Era::Pre1800, Era::Mid, Era::Post1900};

std::string_view to_string(Era era);

namespace stats {

/// Sample Pearson correlation. Throws DataError on a length mismatch,
/// InsufficientDataError for n < 3 or a constant series.
double pearson(std::span<const double> xs, std::span<const double> ys);

/// Regularized incomplete beta I_x(a, b) by Lentz's continued fraction.
double incomplete_beta(double a, double b, double x);

double student_t_cdf(double t, double df);

/// t = r sqrt((n-2)/(1-r^2)); infinite when |r| = 1.
double t_statistic(double r, std::size_t n);

/// Two-sided p for H0: rho = 0 with df = n - 2. |r| = 1 gives 0.
double p_two_sided(double r, std::size_t n);

/// "***" p < 0.001, "**" p < 0.05, "*" p < 0.1, else "".
std::string stars(double p);

CorrelationResult correlate(std::span<const double> xs, std::span<const double> ys);

/// PRE1800 below 1800, MID for 1800..1899, POST1900 from 1900 on.
Era era_of(int year);

using ValueFn = std::function<std::optional<double>(const std::string& lemma)>;

struct WorkAverage {
  double average = 0.0;
  std::size_t resolved = 0;  // distinct lemmas with a value
};

/// Mean value over the distinct partner lemmas of `hits` (one work, one
/// color). Lemmas without a value are ignored; nullopt if none resolve.
std::optional<WorkAverage> work_color_average(std::span<const ColorHit> hits, const ValueFn& value);

struct TrendPoint {
  int year = 0;
  double value = 0.0;
};

/// Pearson over (year, value) points. Throws InsufficientDataError below
/// three points or when either series is constant.
CorrelationResult color_trend(std::span<const TrendPoint> points);

struct RankedNoun {
  std::string lemma;
  std::size_t work_count = 0;
};

/// Partner lemmas of `color` among works of `era`, counted once per work,
/// ranked by work count descending then lemma ascending.
std::vector<RankedNoun> era_top_nouns(std::span<const ColorHit> hits,
                                      std::span<const WorkRecord> catalog, std::string_view color,
                                      Era era, std::size_t k);

/// Raw hit count over the work's word count. Throws DataError when the
/// word count is not positive.
double normalized_frequency(std::size_t hit_count, std::int64_t token_count);
/// Counts hits of `color` in `work_hits` and divides.
double normalized_frequency(std::span<const ColorHit> work_hits, std::string_view color,
                            std::int64_t token_count);

struct ProjectedNoun {
  std::string lemma;
  std::string author;
  double x = 0.0;
  double y = 0.0;
};

/// 2-d PCA view of the nouns two authors attach to `color`. Lemmas without
/// an exact table vector are discarded. Rows are sorted by (author, lemma). Throws DataError if an author is missing from the catalog and
/// InsufficientDataError with fewer than three embeddable lemmas.
std::vector<ProjectedNoun> author_projection(std::span<const ColorHit> hits,
                                             std::span<const WorkRecord> catalog,
                                             const EmbeddingTable& table,
                                             const std::pair<std::string, std::string>& authors,
                                             std::string_view color);

}  // namespace stats
}  // namespace colorlit
