#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "colorlit/corpus.hpp"
#include "colorlit/embed.hpp"
#include "colorlit/extract.hpp"
#include "colorlit/norms.hpp"
#include "colorlit/stats.hpp"

namespace colorlit {

/// Trend rows use the three norm dimensions plus "FREQ" for the
/// normalized-frequency trend.
inline constexpr std::string_view kFrequencyDimension = "FREQ";

struct TrendRow {
  std::string color;
  std::string dimension;
  std::optional<CorrelationResult> result;
  std::string skip_reason;  // set iff !result
};

struct PerWorkRow {
  std::string work_id;
  int year = 0;
  std::string color;
  std::string dimension;
  double average = 0.0;
  std::size_t n_nouns = 0;
};

struct FrequencyRow {
  std::string work_id;
  int year = 0;
  std::string color;
  double frequency = 0.0;
};

struct EraNounRow {
  std::string color;
  Era era = Era::Pre1800;
  std::size_t rank = 0;
  std::string lemma;
  std::size_t work_count = 0;
};

struct ProjectionRow {
  std::string color;
  std::string author;
  std::string lemma;
  double x = 0.0;
  double y = 0.0;
};

struct RunMeta {
  std::string tool_version;
  std::map<std::string, std::uint64_t> seeds;
  std::map<std::string, std::string> input_digests;  // label -> sha256
  std::map<std::string, std::string> settings;
};

struct ReportBundle {
  std::vector<TrendRow> trends;
  std::vector<PerWorkRow> per_work;
  std::vector<FrequencyRow> frequencies;
  std::vector<EraNounRow> era_nouns;
  std::vector<ProjectionRow> projections;
  RunMeta run_meta;
  std::vector<std::string> notes;  // non-fatal skips, printed by the CLI
};

struct ProjectionRequest {
  std::pair<std::string, std::string> authors;
  std::string color;
};

struct AnalyzeConfig {
  std::vector<std::string> colors;  // every color gets rows, hits or not
  EmbeddingSource source;           // used for OOV predictions and projections
  std::size_t era_top_k = 5;
  std::optional<ProjectionRequest> projection;
  RunMeta meta;
};

namespace report {

inline constexpr const char* kTrendsHeader = "color,dimension,n,r,t,p,stars,skip_reason";
inline constexpr const char* kPerWorkHeader = "work_id,year,color,dimension,avg,n_nouns";
inline constexpr const char* kFrequenciesHeader = "work_id,year,color,freq,log10_freq";
inline constexpr const char* kEraNounsHeader = "color,era,rank,lemma,work_count";
inline constexpr const char* kProjectionsHeader = "color,author,lemma,x,y";

/// Computes every table. `models` holds one model per NormDim (nullptr
/// means lookup-only values for that dimension). Trends that cannot be
/// computed appear with a skip reason. Errors are rethrown with the name
/// of the stage that raised them.
ReportBundle run_analyze(const std::vector<WorkRecord>& catalog, const std::vector<ColorHit>& hits,
                         const std::array<const NormModel*, 3>& models, const NormDataset& dataset,
                         const AnalyzeConfig& config);

std::vector<ProjectionRow> projection_rows(const std::vector<ColorHit>& hits,
                                           const std::vector<WorkRecord>& catalog,
                                           const EmbeddingTable& table,
                                           const ProjectionRequest& request);

std::string trends_csv(const std::vector<TrendRow>& rows);
std::string per_work_csv(const std::vector<PerWorkRow>& rows);
std::string frequencies_csv(const std::vector<FrequencyRow>& rows);
std::string era_nouns_csv(const std::vector<EraNounRow>& rows);
std::string projections_csv(const std::vector<ProjectionRow>& rows);
std::string run_meta_json(const RunMeta& meta);

/// Writes trends.csv, per_work.csv, frequencies.csv, era_nouns.csv,
/// projections.csv and run_meta.json, each atomically. Creates `dir`.
/// Returns the written paths.
std::vector<std::string> write_reports(const ReportBundle& bundle, const std::string& dir);

}  // namespace report
}  // namespace colorlit
