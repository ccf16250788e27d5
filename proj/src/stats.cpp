#include "colorlit/stats.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <set>
#include <unordered_map>

#include "colorlit/error.hpp"

namespace colorlit {

std::string_view to_string(Era era) {
  switch (era) {
    case Era::Pre1800: return "pre-1800";
    case Era::Mid: return "1800-1899";
    case Era::Post1900: return "post-1900";
  }
  return "?";
}

namespace stats {

double pearson(std::span<const double> xs, std::span<const double> ys) {
  if (xs.size() != ys.size()) {
    throw DataError("pearson: length mismatch (" + std::to_string(xs.size()) + " vs " +
                    std::to_string(ys.size()) + ")");
  }
  const std::size_t n = xs.size();
  if (n < 3) throw InsufficientDataError("pearson: need at least 3 pairs, got " + std::to_string(n));
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    mx += xs[i];
    my += ys[i];
  }
  mx /= static_cast<double>(n);
  my /= static_cast<double>(n);
  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double dx = xs[i] - mx, dy = ys[i] - my;
    sxy += dx * dy;
    sxx += dx * dx;
    syy += dy * dy;
  }
  if (sxx == 0.0 || syy == 0.0) throw InsufficientDataError("pearson: constant series");
  return std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
}

namespace {

// Continued fraction for I_x(a, b), modified Lentz.
double beta_continued_fraction(double a, double b, double x) {
  constexpr int kMaxIter = 100000;
  constexpr double kEps = 1e-16;
  constexpr double kTiny = 1e-300;
  const double qab = a + b, qap = a + 1.0, qam = a - 1.0;
  double c = 1.0;
  double d = 1.0 - qab * x / qap;
  if (std::abs(d) < kTiny) d = kTiny;
  d = 1.0 / d;
  double h = d;
  for (int m = 1; m <= kMaxIter; ++m) {
    const double m2 = 2.0 * m;
    double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
    d = 1.0 + aa * d;
    if (std::abs(d) < kTiny) d = kTiny;
    c = 1.0 + aa / c;
    if (std::abs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    h *= d * c;
    aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
    d = 1.0 + aa * d;
    if (std::abs(d) < kTiny) d = kTiny;
    c = 1.0 + aa / c;
    if (std::abs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    const double del = d * c;
    h *= del;
    if (std::abs(del - 1.0) < kEps) return h;
  }
  throw DataError("incomplete beta: continued fraction did not converge");
}

}  // namespace

double incomplete_beta(double a, double b, double x) {
  if (!(a > 0.0) || !(b > 0.0)) throw DataError("incomplete beta: a and b must be positive");
  if (x < 0.0 || x > 1.0) throw DataError("incomplete beta: x outside [0, 1]");
  if (x == 0.0) return 0.0;
  if (x == 1.0) return 1.0;
  const double log_front = std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b) + a * std::log(x) +
                           b * std::log1p(-x);
  const double front = std::exp(log_front);
  if (x < (a + 1.0) / (a + b + 2.0)) return front * beta_continued_fraction(a, b, x) / a;
  return 1.0 - front * beta_continued_fraction(b, a, 1.0 - x) / b;
}

double student_t_cdf(double t, double df) {
  if (!(df > 0.0)) throw DataError("student_t_cdf: df must be positive");
  if (std::isinf(t)) return t > 0 ? 1.0 : 0.0;
  const double tail = 0.5 * incomplete_beta(0.5 * df, 0.5, df / (df + t * t));
  return t >= 0 ? 1.0 - tail : tail;
}

double t_statistic(double r, std::size_t n) {
  if (n < 3) throw DataError("t statistic needs n >= 3");
  if (r < -1.0 || r > 1.0) throw DataError("correlation outside [-1, 1]");
  if (std::abs(r) == 1.0) return std::copysign(std::numeric_limits<double>::infinity(), r);
  return r * std::sqrt(static_cast<double>(n - 2) / (1.0 - r * r));
}

double p_two_sided(double r, std::size_t n) {
  const double t = t_statistic(r, n);
  if (std::isinf(t)) return 0.0;
  const double df = static_cast<double>(n - 2);
  // 2 * (1 - CDF(|t|)) equals I_{df/(df+t^2)}(df/2, 1/2) directly.
  return std::clamp(incomplete_beta(0.5 * df, 0.5, df / (df + t * t)), 0.0, 1.0);
}

std::string stars(double p) {
  if (p < 0.001) return "***";
  if (p < 0.05) return "**";
  if (p < 0.1) return "*";
  return "";
}

CorrelationResult correlate(std::span<const double> xs, std::span<const double> ys) {
  CorrelationResult out;
  out.n = xs.size();
  out.r = pearson(xs, ys);
  out.t = t_statistic(out.r, out.n);
  out.p = p_two_sided(out.r, out.n);
  out.stars = stars(out.p);
  return out;
}

Era era_of(int year) {
  if (year < 1800) return Era::Pre1800;
  if (year < 1900) return Era::Mid;
  return Era::Post1900;
}

std::optional<WorkAverage> work_color_average(std::span<const ColorHit> hits, const ValueFn& value) {
  std::set<std::string> lemmas;
  for (const auto& h : hits) lemmas.insert(h.partner_lemma);
  WorkAverage out;
  double sum = 0.0;
  for (const auto& lemma : lemmas) {
    if (auto v = value(lemma)) {
      sum += *v;
      ++out.resolved;
    }
  }
  if (out.resolved == 0) return std::nullopt;
  out.average = sum / static_cast<double>(out.resolved);
  return out;
}

CorrelationResult color_trend(std::span<const TrendPoint> points) {
  if (points.size() < 3) {
    throw InsufficientDataError("trend needs at least 3 works, got " + std::to_string(points.size()));
  }
  std::vector<double> years, values;
  for (const auto& p : points) {
    years.push_back(static_cast<double>(p.year));
    values.push_back(p.value);
  }
  return correlate(years, values);
}

std::vector<RankedNoun> era_top_nouns(std::span<const ColorHit> hits,
                                      std::span<const WorkRecord> catalog, std::string_view color,
                                      Era era, std::size_t k) {
  if (k == 0) throw DataError("era_top_nouns: k must be at least 1");
  std::unordered_map<std::string, int> year_of;
  for (const auto& w : catalog) year_of.emplace(w.work_id, w.year);
  std::set<std::pair<std::string, std::string>> work_lemma;
  for (const auto& h : hits) {
    if (h.color != color) continue;
    auto it = year_of.find(h.work_id);
    if (it == year_of.end() || era_of(it->second) != era) continue;
    work_lemma.emplace(h.work_id, h.partner_lemma);
  }
  std::map<std::string, std::size_t> counts;
  for (const auto& [work, lemma] : work_lemma) ++counts[lemma];
  std::vector<RankedNoun> ranked;
  for (const auto& [lemma, n] : counts) ranked.push_back({lemma, n});
  std::stable_sort(ranked.begin(), ranked.end(), [](const RankedNoun& a, const RankedNoun& b) {
    if (a.work_count != b.work_count) return a.work_count > b.work_count;
    return a.lemma < b.lemma;
  });
  if (ranked.size() > k) ranked.resize(k);
  return ranked;
}

double normalized_frequency(std::size_t hit_count, std::int64_t token_count) {
  if (token_count <= 0) throw DataError("normalized frequency needs a positive word count");
  return static_cast<double>(hit_count) / static_cast<double>(token_count);
}

double normalized_frequency(std::span<const ColorHit> work_hits, std::string_view color,
                            std::int64_t token_count) {
  const auto n = std::count_if(work_hits.begin(), work_hits.end(),
                               [&](const ColorHit& h) { return h.color == color; });
  return normalized_frequency(static_cast<std::size_t>(n), token_count);
}

std::vector<ProjectedNoun> author_projection(std::span<const ColorHit> hits,
                                             std::span<const WorkRecord> catalog,
                                             const EmbeddingTable& table,
                                             const std::pair<std::string, std::string>& authors,
                                             std::string_view color) {
  std::unordered_map<std::string, std::string> author_of;
  bool first_found = false, second_found = false;
  for (const auto& w : catalog) {
    if (w.author == authors.first) {
      first_found = true;
      author_of[w.work_id] = w.author;
    } else if (w.author == authors.second) {
      second_found = true;
      author_of[w.work_id] = w.author;
    }
  }
  if (!first_found) throw DataError("author '" + authors.first + "' not in catalog");
  if (!second_found) throw DataError("author '" + authors.second + "' not in catalog");

  std::set<std::pair<std::string, std::string>> author_lemma;
  std::set<std::string> vocab;
  for (const auto& h : hits) {
    if (h.color != color) continue;
    auto it = author_of.find(h.work_id);
    if (it == author_of.end() || !table.contains(h.partner_lemma)) continue;
    author_lemma.emplace(it->second, h.partner_lemma);
    vocab.insert(h.partner_lemma);
  }
  if (vocab.size() < 3) {
    throw InsufficientDataError("author projection for '" + std::string(color) + "' needs at least 3 "
                                "embeddable nouns, found " + std::to_string(vocab.size()));
  }

  Matrix rows(vocab.size(), table.dim());
  std::unordered_map<std::string, std::size_t> row_of;
  std::size_t r = 0;
  for (const auto& lemma : vocab) {
    const auto v = *table.find(lemma);
    std::copy(v.begin(), v.end(), rows.row(r).begin());
    row_of[lemma] = r++;
  }
  const auto proj = embed::fit_pca(rows, std::min<std::size_t>(2, table.dim()));

  std::vector<ProjectedNoun> out;
  for (const auto& [author, lemma] : author_lemma) {
    const auto xy = embed::project(rows.row(row_of.at(lemma)), proj);
    out.push_back({lemma, author, xy[0], xy.size() > 1 ? xy[1] : 0.0});
  }
  return out;
}

}  // namespace stats
}  // namespace colorlit
