#include "colorlit/report.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <set>
#include <tuple>
#include <unordered_map>

#include <nlohmann/json.hpp>

#include "colorlit/csv.hpp"
#include "colorlit/error.hpp"
#include "colorlit/text.hpp"

namespace colorlit::report {

namespace {

template <typename Fn>
auto staged(const std::string& stage, Fn&& fn) -> decltype(fn()) {
  try {
    return fn();
  } catch (const InsufficientDataError& e) {
    throw InsufficientDataError("analyze/" + stage + ": " + e.what());
  } catch (const DataError& e) {
    throw DataError("analyze/" + stage + ": " + e.what());
  } catch (const IoError& e) {
    throw IoError("analyze/" + stage + ": " + e.what());
  }
}

int dimension_order(std::string_view d) {
  if (d == "IMAG") return 0;
  if (d == "CNC") return 1;
  if (d == "VAL") return 2;
  return 3;
}

std::string num(double v) { return text::format_sig6(v); }

}  // namespace

std::vector<ProjectionRow> projection_rows(const std::vector<ColorHit>& hits,
                                           const std::vector<WorkRecord>& catalog,
                                           const EmbeddingTable& table,
                                           const ProjectionRequest& request) {
  std::vector<ProjectionRow> rows;
  for (auto& p : stats::author_projection(hits, catalog, table, request.authors, request.color)) {
    rows.push_back({request.color, std::move(p.author), std::move(p.lemma), p.x, p.y});
  }
  std::sort(rows.begin(), rows.end(), [](const ProjectionRow& a, const ProjectionRow& b) {
    return std::tie(a.color, a.author, a.lemma) < std::tie(b.color, b.author, b.lemma);
  });
  return rows;
}

ReportBundle run_analyze(const std::vector<WorkRecord>& catalog, const std::vector<ColorHit>& hits,
                         const std::array<const NormModel*, 3>& models, const NormDataset& dataset,
                         const AnalyzeConfig& config) {
  ReportBundle bundle;
  bundle.run_meta = config.meta;

  std::vector<std::string> colors = config.colors;
  std::sort(colors.begin(), colors.end());
  colors.erase(std::unique(colors.begin(), colors.end()), colors.end());

  // Works in (year, work_id) order; hits grouped per (work, color).
  std::vector<const WorkRecord*> works;
  std::unordered_map<std::string, const WorkRecord*> by_id;
  for (const auto& w : catalog) {
    works.push_back(&w);
    by_id.emplace(w.work_id, &w);
  }
  std::sort(works.begin(), works.end(), [](const WorkRecord* a, const WorkRecord* b) {
    return std::tie(a->year, a->work_id) < std::tie(b->year, b->work_id);
  });

  std::map<std::pair<std::string, std::string>, std::vector<ColorHit>> grouped;
  staged("hits", [&] {
    for (const auto& h : hits) {
      if (!by_id.contains(h.work_id)) {
        throw DataError("hit references work '" + h.work_id + "' absent from the catalog");
      }
      grouped[{h.work_id, h.color}].push_back(h);
    }
    return 0;
  });

  // Per-work averages and norm trends.
  for (NormDim d : kNormDims) {
    const NormModel* model = models[static_cast<std::size_t>(d)];
    const std::string dim_name(to_string(d));
    std::unordered_map<std::string, std::optional<double>> cache;
    stats::ValueFn value = [&](const std::string& lemma) -> std::optional<double> {
      if (auto it = cache.find(lemma); it != cache.end()) return it->second;
      std::optional<double> v;
      if (model) {
        if (auto nv = norms::predict_value(lemma, d, dataset, *model, config.source)) v = nv->value;
      } else {
        v = dataset.normalized(lemma, d);
      }
      cache.emplace(lemma, v);
      return v;
    };
    for (const auto& color : colors) {
      std::vector<stats::TrendPoint> points;
      staged("per-work/" + dim_name, [&] {
        for (const WorkRecord* w : works) {
          auto it = grouped.find({w->work_id, color});
          if (it == grouped.end()) continue;
          if (auto avg = stats::work_color_average(it->second, value)) {
            bundle.per_work.push_back({w->work_id, w->year, color, dim_name, avg->average, avg->resolved});
            points.push_back({w->year, avg->average});
          }
        }
        return 0;
      });
      TrendRow row{color, dim_name, std::nullopt, ""};
      try {
        row.result = stats::color_trend(points);
      } catch (const InsufficientDataError& e) {
        row.skip_reason = e.what();
      }
      bundle.trends.push_back(std::move(row));
    }
  }

  // Normalized frequencies and their trends.
  std::set<std::string> uncounted;
  for (const auto& color : colors) {
    std::vector<stats::TrendPoint> points;
    staged("frequencies", [&] {
      for (const WorkRecord* w : works) {
        if (w->token_count <= 0) {
          uncounted.insert(w->work_id);
          continue;
        }
        auto it = grouped.find({w->work_id, color});
        const std::size_t n = it == grouped.end() ? 0 : it->second.size();
        const double f = stats::normalized_frequency(n, w->token_count);
        bundle.frequencies.push_back({w->work_id, w->year, color, f});
        points.push_back({w->year, f});
      }
      return 0;
    });
    TrendRow row{color, std::string(kFrequencyDimension), std::nullopt, ""};
    try {
      row.result = stats::color_trend(points);
    } catch (const InsufficientDataError& e) {
      row.skip_reason = e.what();
    }
    bundle.trends.push_back(std::move(row));
  }
  for (const auto& id : uncounted) {
    bundle.notes.push_back("work '" + id + "' has no word count; excluded from frequencies");
  }

  // Era top nouns.
  staged("era-nouns", [&] {
    for (const auto& color : colors) {
      for (Era era : kEras) {
        auto ranked = stats::era_top_nouns(hits, catalog, color, era, config.era_top_k);
        for (std::size_t i = 0; i < ranked.size(); ++i) {
          bundle.era_nouns.push_back({color, era, i + 1, ranked[i].lemma, ranked[i].work_count});
        }
      }
    }
    return 0;
  });

  if (config.projection) {
    if (!config.source.table) throw DataError("analyze/projections: no embedding table supplied");
    bundle.projections = staged("projections", [&] {
      return projection_rows(hits, catalog, *config.source.table, *config.projection);
    });
  }

  std::stable_sort(bundle.trends.begin(), bundle.trends.end(), [](const TrendRow& a, const TrendRow& b) {
    return std::make_tuple(a.color, dimension_order(a.dimension)) <
           std::make_tuple(b.color, dimension_order(b.dimension));
  });
  std::stable_sort(bundle.per_work.begin(), bundle.per_work.end(),
                   [](const PerWorkRow& a, const PerWorkRow& b) {
                     return std::make_tuple(a.year, a.work_id, a.color, dimension_order(a.dimension)) <
                            std::make_tuple(b.year, b.work_id, b.color, dimension_order(b.dimension));
                   });
  std::stable_sort(bundle.frequencies.begin(), bundle.frequencies.end(),
                   [](const FrequencyRow& a, const FrequencyRow& b) {
                     return std::tie(a.year, a.work_id, a.color) < std::tie(b.year, b.work_id, b.color);
                   });
  std::stable_sort(bundle.era_nouns.begin(), bundle.era_nouns.end(),
                   [](const EraNounRow& a, const EraNounRow& b) {
                     return std::tie(a.color, a.era, a.rank) < std::tie(b.color, b.era, b.rank);
                   });
  return bundle;
}

std::string trends_csv(const std::vector<TrendRow>& rows) {
  std::string out = std::string(kTrendsHeader) + "\n";
  for (const auto& r : rows) {
    if (r.result) {
      out += csv::join({r.color, r.dimension, std::to_string(r.result->n), num(r.result->r),
                        num(r.result->t), num(r.result->p), r.result->stars, ""});
    } else {
      out += csv::join({r.color, r.dimension, "", "", "", "", "", r.skip_reason});
    }
    out.push_back('\n');
  }
  return out;
}

std::string per_work_csv(const std::vector<PerWorkRow>& rows) {
  std::string out = std::string(kPerWorkHeader) + "\n";
  for (const auto& r : rows) {
    out += csv::join({r.work_id, std::to_string(r.year), r.color, r.dimension, num(r.average),
                      std::to_string(r.n_nouns)});
    out.push_back('\n');
  }
  return out;
}

std::string frequencies_csv(const std::vector<FrequencyRow>& rows) {
  std::string out = std::string(kFrequenciesHeader) + "\n";
  for (const auto& r : rows) {
    out += csv::join({r.work_id, std::to_string(r.year), r.color, num(r.frequency),
                      r.frequency > 0 ? num(std::log10(r.frequency)) : ""});
    out.push_back('\n');
  }
  return out;
}

std::string era_nouns_csv(const std::vector<EraNounRow>& rows) {
  std::string out = std::string(kEraNounsHeader) + "\n";
  for (const auto& r : rows) {
    out += csv::join({r.color, std::string(to_string(r.era)), std::to_string(r.rank), r.lemma,
                      std::to_string(r.work_count)});
    out.push_back('\n');
  }
  return out;
}

std::string projections_csv(const std::vector<ProjectionRow>& rows) {
  std::string out = std::string(kProjectionsHeader) + "\n";
  for (const auto& r : rows) {
    out += csv::join({r.color, r.author, r.lemma, num(r.x), num(r.y)});
    out.push_back('\n');
  }
  return out;
}

std::string run_meta_json(const RunMeta& meta) {
  nlohmann::ordered_json j;
  j["tool_version"] = meta.tool_version;
  j["seeds"] = meta.seeds;
  j["input_digests"] = meta.input_digests;
  j["settings"] = meta.settings;
  return j.dump(2) + "\n";
}

std::vector<std::string> write_reports(const ReportBundle& bundle, const std::string& dir) {
  namespace fs = std::filesystem;
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw IoError("cannot create directory '" + dir + "': " + ec.message());
  const std::vector<std::pair<std::string, std::string>> files = {
      {"trends.csv", trends_csv(bundle.trends)},
      {"per_work.csv", per_work_csv(bundle.per_work)},
      {"frequencies.csv", frequencies_csv(bundle.frequencies)},
      {"era_nouns.csv", era_nouns_csv(bundle.era_nouns)},
      {"projections.csv", projections_csv(bundle.projections)},
      {"run_meta.json", run_meta_json(bundle.run_meta)},
  };
  std::vector<std::string> written;
  for (const auto& [name, contents] : files) {
    const auto path = (fs::path(dir) / name).string();
    text::write_file_atomic(path, contents);
    written.push_back(path);
  }
  return written;
}

}  // namespace colorlit::report
