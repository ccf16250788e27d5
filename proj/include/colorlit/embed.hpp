#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "colorlit/linalg.hpp"

namespace colorlit {

/// Word vectors sharing one dimension.
class EmbeddingTable {
 public:
  EmbeddingTable() = default;
  explicit EmbeddingTable(std::size_t dim) : dim_(dim) {}

  std::size_t dim() const { return dim_; }
  std::size_t size() const { return words_.size(); }
  const std::vector<std::string>& words() const { return words_; }

  /// Throws DataError on a width mismatch or a duplicate word.
  void add(std::string word, std::span<const double> vec);
  bool contains(std::string_view word) const { return index_.contains(std::string(word)); }
  std::optional<std::span<const double>> find(std::string_view word) const;

 private:
  std::size_t dim_ = 0;
  std::vector<std::string> words_;
  std::vector<double> data_;
  std::unordered_map<std::string, std::size_t> index_;
};

/// Hashed character n-gram vectors. Buckets absent from the export are zero.
class SubwordModel {
 public:
  SubwordModel(std::uint32_t bucket_count, int n_min, int n_max, std::size_t dim);

  std::uint32_t bucket_count() const { return bucket_count_; }
  int n_min() const { return n_min_; }
  int n_max() const { return n_max_; }
  std::size_t dim() const { return dim_; }
  std::size_t stored_buckets() const { return index_.size(); }

  void set_bucket(std::uint32_t bucket, std::span<const double> vec);
  /// Empty span for a zero (absent) bucket.
  std::span<const double> bucket(std::uint32_t bucket) const;

 private:
  std::uint32_t bucket_count_;
  int n_min_;
  int n_max_;
  std::size_t dim_;
  std::vector<double> data_;
  std::unordered_map<std::uint32_t, std::size_t> index_;
};

/// Table plus optional subword model; the pair every embedding lookup needs.
struct EmbeddingSource {
  const EmbeddingTable* table = nullptr;
  const SubwordModel* subwords = nullptr;

  std::optional<std::vector<double>> embed(std::string_view word) const;
  std::size_t dim() const { return table ? table->dim() : 0; }
};

/// Mean-centred orthonormal projection to k dimensions.
struct Projection {
  std::vector<double> mean;          // length dim
  Matrix basis;                      // dim x k, orthonormal columns
  std::vector<double> eigenvalues;   // top-k covariance eigenvalues
  std::size_t dim() const { return basis.rows(); }
  std::size_t k() const { return basis.cols(); }
};

namespace embed {

/// Text vector format: "count dim" header, then "word v1 .. v_dim" rows.
/// When `keep` is given only those words are stored, but every row is
/// still validated. Throws DataError with the line number on a width
/// mismatch, a bad number, a duplicate word or a wrong row count.
EmbeddingTable load_vec(const std::string& path, const std::unordered_set<std::string>* keep = nullptr);
EmbeddingTable parse_vec(std::string_view data, std::string_view source = "<vec>",
                         const std::unordered_set<std::string>* keep = nullptr);
std::string serialize_vec(const EmbeddingTable& table);

/// Subword export: "BUCKETS N_MIN N_MAX DIM" header, then
/// "bucket_index v1 .. v_dim" rows.
SubwordModel load_subwords(const std::string& path);
SubwordModel parse_subwords(std::string_view data, std::string_view source = "<subwords>");

/// 32-bit FNV-1a over raw bytes.
std::uint32_t fnv1a32(std::string_view bytes);

/// The embedding toolkit's n-gram hash: FNV-1a where each byte is first
/// sign-extended from int8. Identical to fnv1a32 on ASCII input.
std::uint32_t toolkit_hash(std::string_view bytes);

/// Character n-grams (UTF-8 aware) of "<word>" with n in [n_min, n_max],
/// ordered by start position then length.
std::vector<std::string> char_ngrams(std::string_view word, int n_min, int n_max);

/// Mean of the word's table row (if present) and one bucket vector per
/// n-gram. Throws DataError for an empty word, or when no n-gram exists
/// and the word is not in the table.
std::vector<double> compose_subword_vector(std::string_view word, const EmbeddingTable& table,
                                           const SubwordModel& sw);

/// Exact row without a subword model; composed vector with one.
std::optional<std::vector<double>> embed(std::string_view word, const EmbeddingTable& table,
                                         const SubwordModel* sw);

/// PCA on the rows of `rows` (m x dim). Basis columns are the top-k
/// eigenvectors of the sample covariance, eigenvalue-descending, each
/// signed so its largest-magnitude entry is positive. Throws DataError if
/// k is 0 or exceeds min(m, dim).
Projection fit_pca(const Matrix& rows, std::size_t k);

/// basis^T (v - mean). Throws DataError on a length mismatch.
std::vector<double> project(std::span<const double> v, const Projection& p);

}  // namespace embed
}  // namespace colorlit
