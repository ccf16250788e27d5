#include "colorlit/embed.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "colorlit/error.hpp"
#include "colorlit/text.hpp"

namespace colorlit {

void EmbeddingTable::add(std::string word, std::span<const double> vec) {
  if (vec.size() != dim_) {
    throw DataError("vector for '" + word + "' has " + std::to_string(vec.size()) +
                    " components, expected " + std::to_string(dim_));
  }
  auto [it, inserted] = index_.emplace(word, words_.size());
  if (!inserted) throw DataError("duplicate word '" + word + "'");
  words_.push_back(std::move(word));
  data_.insert(data_.end(), vec.begin(), vec.end());
}

std::optional<std::span<const double>> EmbeddingTable::find(std::string_view word) const {
  auto it = index_.find(std::string(word));
  if (it == index_.end()) return std::nullopt;
  return std::span<const double>(data_.data() + it->second * dim_, dim_);
}

SubwordModel::SubwordModel(std::uint32_t bucket_count, int n_min, int n_max, std::size_t dim)
    : bucket_count_(bucket_count), n_min_(n_min), n_max_(n_max), dim_(dim) {
  if (bucket_count == 0) throw DataError("subword model: bucket count must be positive");
  if (n_min < 3 || n_max < n_min) {
    throw DataError("subword model: need 3 <= n_min <= n_max, got " + std::to_string(n_min) +
                    ".." + std::to_string(n_max));
  }
  if (dim == 0) throw DataError("subword model: dimension must be positive");
}

void SubwordModel::set_bucket(std::uint32_t bucket, std::span<const double> vec) {
  if (bucket >= bucket_count_) {
    throw DataError("bucket " + std::to_string(bucket) + " out of range [0, " +
                    std::to_string(bucket_count_) + ")");
  }
  if (vec.size() != dim_) throw DataError("bucket " + std::to_string(bucket) + " has wrong width");
  auto [it, inserted] = index_.emplace(bucket, data_.size() / dim_);
  if (!inserted) throw DataError("duplicate bucket " + std::to_string(bucket));
  data_.insert(data_.end(), vec.begin(), vec.end());
}

std::span<const double> SubwordModel::bucket(std::uint32_t bucket) const {
  auto it = index_.find(bucket);
  if (it == index_.end()) return {};
  return {data_.data() + it->second * dim_, dim_};
}

std::optional<std::vector<double>> EmbeddingSource::embed(std::string_view word) const {
  if (!table) return std::nullopt;
  return embed::embed(word, *table, subwords);
}

namespace embed {

namespace {

bool parse_double(std::string_view s, double& out) {
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
  return ec == std::errc{} && ptr == s.data() + s.size();
}

template <typename T>
bool parse_uint(std::string_view s, T& out) {
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
  return ec == std::errc{} && ptr == s.data() + s.size();
}

[[noreturn]] void fail(std::string_view source, std::size_t line, const std::string& what) {
  throw DataError(std::string(source) + ":" + std::to_string(line) + ": " + what);
}

template <typename RowFn>
void for_each_line(std::istream& in, RowFn&& fn) {
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    fn(lineno, std::string_view(line));
  }
}

EmbeddingTable parse_vec_stream(std::istream& in, std::string_view source,
                                const std::unordered_set<std::string>* keep) {
  std::size_t count = 0, dim = 0, rows = 0;
  bool have_header = false;
  EmbeddingTable table;
  std::unordered_set<std::string> seen;
  std::vector<double> vec;
  for_each_line(in, [&](std::size_t lineno, std::string_view line) {
    auto fields = text::split_ws(line);
    if (!have_header) {
      if (fields.size() != 2 || !parse_uint(fields[0], count) || !parse_uint(fields[1], dim) ||
          dim == 0) {
        fail(source, lineno, "expected header 'count dim'");
      }
      have_header = true;
      table = EmbeddingTable(dim);
      return;
    }
    if (fields.empty()) return;
    if (fields.size() != dim + 1) {
      fail(source, lineno, "expected " + std::to_string(dim) + " values, found " +
                               std::to_string(fields.size() - 1));
    }
    std::string word(fields[0]);
    if (!seen.insert(word).second) fail(source, lineno, "duplicate word '" + word + "'");
    ++rows;
    if (keep && !keep->contains(word)) return;
    vec.resize(dim);
    for (std::size_t i = 0; i < dim; ++i) {
      if (!parse_double(fields[i + 1], vec[i])) {
        fail(source, lineno, "bad number '" + std::string(fields[i + 1]) + "'");
      }
    }
    table.add(std::move(word), vec);
  });
  if (!have_header) throw DataError(std::string(source) + ": empty vector file");
  if (rows != count) {
    throw DataError(std::string(source) + ": header promises " + std::to_string(count) +
                    " rows, found " + std::to_string(rows));
  }
  return table;
}

SubwordModel parse_subwords_stream(std::istream& in, std::string_view source) {
  std::optional<SubwordModel> model;
  std::vector<double> vec;
  for_each_line(in, [&](std::size_t lineno, std::string_view line) {
    auto fields = text::split_ws(line);
    if (!model) {
      std::uint32_t buckets = 0;
      int n_min = 0, n_max = 0;
      std::size_t dim = 0;
      if (fields.size() != 4 || !parse_uint(fields[0], buckets) || !parse_uint(fields[1], n_min) ||
          !parse_uint(fields[2], n_max) || !parse_uint(fields[3], dim)) {
        fail(source, lineno, "expected header 'BUCKETS N_MIN N_MAX DIM'");
      }
      try {
        model.emplace(buckets, n_min, n_max, dim);
      } catch (const DataError& e) {
        fail(source, lineno, e.what());
      }
      return;
    }
    if (fields.empty()) return;
    const std::size_t dim = model->dim();
    if (fields.size() != dim + 1) {
      fail(source, lineno, "expected " + std::to_string(dim) + " values, found " +
                               std::to_string(fields.size() - 1));
    }
    std::uint32_t bucket = 0;
    if (!parse_uint(fields[0], bucket)) fail(source, lineno, "bad bucket index");
    vec.resize(dim);
    for (std::size_t i = 0; i < dim; ++i) {
      if (!parse_double(fields[i + 1], vec[i])) fail(source, lineno, "bad number");
    }
    try {
      model->set_bucket(bucket, vec);
    } catch (const DataError& e) {
      fail(source, lineno, e.what());
    }
  });
  if (!model) throw DataError(std::string(source) + ": empty subword file");
  return std::move(*model);
}

}  // namespace

EmbeddingTable load_vec(const std::string& path, const std::unordered_set<std::string>* keep) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path + "'");
  return parse_vec_stream(in, path, keep);
}

EmbeddingTable parse_vec(std::string_view data, std::string_view source,
                         const std::unordered_set<std::string>* keep) {
  std::istringstream in{std::string(data)};
  return parse_vec_stream(in, source, keep);
}

std::string serialize_vec(const EmbeddingTable& table) {
  std::string out = std::to_string(table.size()) + " " + std::to_string(table.dim()) + "\n";
  char buf[32];
  for (const auto& w : table.words()) {
    out += w;
    const auto vec = *table.find(w);
    for (double x : vec) {
      auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, x);
      out.push_back(' ');
      out.append(buf, ptr);
    }
    out.push_back('\n');
  }
  return out;
}

SubwordModel load_subwords(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path + "'");
  return parse_subwords_stream(in, path);
}

SubwordModel parse_subwords(std::string_view data, std::string_view source) {
  std::istringstream in{std::string(data)};
  return parse_subwords_stream(in, source);
}

std::uint32_t fnv1a32(std::string_view bytes) {
  std::uint32_t h = 2166136261u;
  for (unsigned char b : bytes) {
    h ^= b;
    h *= 16777619u;
  }
  return h;
}

std::uint32_t toolkit_hash(std::string_view bytes) {
  std::uint32_t h = 2166136261u;
  for (char c : bytes) {
    h ^= static_cast<std::uint32_t>(static_cast<std::int8_t>(c));
    h *= 16777619u;
  }
  return h;
}

std::vector<std::string> char_ngrams(std::string_view word, int n_min, int n_max) {
  const std::string wrapped = "<" + std::string(word) + ">";
  auto is_continuation = [&](std::size_t i) {
    return (static_cast<unsigned char>(wrapped[i]) & 0xC0) == 0x80;
  };
  std::vector<std::string> out;
  for (std::size_t i = 0; i < wrapped.size(); ++i) {
    if (is_continuation(i)) continue;
    std::string gram;
    std::size_t j = i;
    for (int n = 1; j < wrapped.size() && n <= n_max; ++n) {
      gram.push_back(wrapped[j++]);
      while (j < wrapped.size() && is_continuation(j)) gram.push_back(wrapped[j++]);
      if (n >= n_min) out.push_back(gram);
    }
  }
  return out;
}

std::vector<double> compose_subword_vector(std::string_view word, const EmbeddingTable& table,
                                           const SubwordModel& sw) {
  if (word.empty()) throw DataError("compose_subword_vector: empty word");
  if (sw.dim() != table.dim()) {
    throw DataError("subword model width " + std::to_string(sw.dim()) +
                    " does not match embedding width " + std::to_string(table.dim()));
  }
  const auto grams = char_ngrams(word, sw.n_min(), sw.n_max());
  const auto row = table.find(word);
  if (grams.empty() && !row) {
    throw DataError("'" + std::string(word) + "' is out of vocabulary and has no n-grams");
  }
  std::vector<double> sum(table.dim(), 0.0);
  std::size_t count = 0;
  if (row) {
    for (std::size_t i = 0; i < sum.size(); ++i) sum[i] += (*row)[i];
    ++count;
  }
  for (const auto& g : grams) {
    const auto b = sw.bucket(toolkit_hash(g) % sw.bucket_count());
    for (std::size_t i = 0; i < b.size(); ++i) sum[i] += b[i];
    ++count;
  }
  for (double& x : sum) x /= static_cast<double>(count);
  return sum;
}

std::optional<std::vector<double>> embed(std::string_view word, const EmbeddingTable& table,
                                         const SubwordModel* sw) {
  if (word.empty()) return std::nullopt;
  if (!sw) {
    auto row = table.find(word);
    if (!row) return std::nullopt;
    return std::vector<double>(row->begin(), row->end());
  }
  try {
    return compose_subword_vector(word, table, *sw);
  } catch (const DataError&) {
    return std::nullopt;
  }
}

Projection fit_pca(const Matrix& rows, std::size_t k) {
  const std::size_t m = rows.rows();
  const std::size_t dim = rows.cols();
  if (k == 0 || k > std::min(m, dim)) {
    throw DataError("fit_pca: k=" + std::to_string(k) + " must be in [1, min(rows=" +
                    std::to_string(m) + ", dim=" + std::to_string(dim) + ")]");
  }
  Projection p;
  p.mean.assign(dim, 0.0);
  for (std::size_t r = 0; r < m; ++r)
    for (std::size_t c = 0; c < dim; ++c) p.mean[c] += rows(r, c);
  for (double& x : p.mean) x /= static_cast<double>(m);

  Matrix cov(dim, dim);
  std::vector<double> centred(dim);
  for (std::size_t r = 0; r < m; ++r) {
    for (std::size_t c = 0; c < dim; ++c) centred[c] = rows(r, c) - p.mean[c];
    for (std::size_t i = 0; i < dim; ++i) {
      const double ci = centred[i];
      for (std::size_t j = i; j < dim; ++j) cov(i, j) += ci * centred[j];
    }
  }
  const double denom = m > 1 ? static_cast<double>(m - 1) : 1.0;
  for (std::size_t i = 0; i < dim; ++i) {
    for (std::size_t j = i; j < dim; ++j) {
      cov(i, j) /= denom;
      cov(j, i) = cov(i, j);
    }
  }

  const auto eig = linalg::jacobi_eigen(cov);
  p.basis = Matrix(dim, k);
  p.eigenvalues.assign(eig.values.begin(), eig.values.begin() + static_cast<std::ptrdiff_t>(k));
  for (std::size_t j = 0; j < k; ++j) {
    std::size_t arg = 0;
    for (std::size_t i = 1; i < dim; ++i) {
      if (std::abs(eig.vectors(i, j)) > std::abs(eig.vectors(arg, j))) arg = i;
    }
    const double sign = eig.vectors(arg, j) < 0 ? -1.0 : 1.0;
    for (std::size_t i = 0; i < dim; ++i) p.basis(i, j) = sign * eig.vectors(i, j);
  }
  return p;
}

std::vector<double> project(std::span<const double> v, const Projection& p) {
  if (v.size() != p.dim()) {
    throw DataError("project: vector length " + std::to_string(v.size()) + " != " +
                    std::to_string(p.dim()));
  }
  std::vector<double> out(p.k(), 0.0);
  for (std::size_t i = 0; i < p.dim(); ++i) {
    const double c = v[i] - p.mean[i];
    for (std::size_t j = 0; j < p.k(); ++j) out[j] += p.basis(i, j) * c;
  }
  return out;
}

}  // namespace embed
}  // namespace colorlit
