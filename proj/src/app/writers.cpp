#include "agenda/app/writers.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>

#include "agenda/analytics/stats.hpp"
#include "agenda/core/errors.hpp"

namespace agenda::app {

namespace {

std::ofstream open_with_stamp(const std::string& path,
                              const RunConfig& config) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) {
    throw DataError("cannot open output file: " + path);
  }
  out << "# run_id=" << config.run_id << "\n";
  out << "# config_hash=" << config.config_hash << "\n";
  out << "# seed=" << config.model.rng_seed << "\n";
  return out;
}

std::string fixed(double value, int digits) {
  if (std::isnan(value)) return "NA";
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.*f", digits, value);
  return buf;
}

std::string stars_text(int stars) { return std::string(stars, '*'); }

std::string label_of(const std::map<int, std::string>& labels, int topic_id) {
  auto it = labels.find(topic_id);
  if (it != labels.end()) return it->second;
  return "topic-" + std::to_string(topic_id);
}

}  // namespace

void write_salience_tsv(const std::string& path, const RunConfig& config,
                        const analytics::SalienceTable& table,
                        const std::map<int, std::string>& labels) {
  std::ofstream out = open_with_stamp(path, config);

  // Column order follows the config; rows ranked by the first given column
  // (seeds by the labeled corpus, new topics by the first unlabeled one).
  std::vector<std::size_t> column_order;
  for (const auto& corpus : config.corpora) {
    for (std::size_t c = 0; c < table.corpora.size(); ++c) {
      if (table.corpora[c] == corpus.tag) column_order.push_back(c);
    }
  }
  for (std::size_t c = 0; c < table.corpora.size(); ++c) {
    if (std::find(column_order.begin(), column_order.end(), c) ==
        column_order.end()) {
      column_order.push_back(c);
    }
  }

  auto percent_at = [&](std::size_t row, std::size_t order_pos) {
    const auto& cell = table.cells[row][column_order[order_pos]];
    return std::isnan(cell.percent) ? -1.0 : cell.percent;
  };
  std::vector<std::size_t> seed_rows, new_rows;
  for (std::size_t row = 0; row < table.topic_ids.size(); ++row) {
    (table.topic_ids[row] <= table.seed_topic_count ? seed_rows : new_rows)
        .push_back(row);
  }
  std::sort(seed_rows.begin(), seed_rows.end(), [&](std::size_t a, std::size_t b) {
    if (percent_at(a, 0) != percent_at(b, 0)) {
      return percent_at(a, 0) > percent_at(b, 0);
    }
    return table.topic_ids[a] < table.topic_ids[b];
  });
  const std::size_t new_sort_column = column_order.size() > 1 ? 1 : 0;
  std::sort(new_rows.begin(), new_rows.end(), [&](std::size_t a, std::size_t b) {
    if (percent_at(a, new_sort_column) != percent_at(b, new_sort_column)) {
      return percent_at(a, new_sort_column) > percent_at(b, new_sort_column);
    }
    return table.topic_ids[a] < table.topic_ids[b];
  });

  out << "topic\tlabel\torigin";
  for (std::size_t c : column_order) out << '\t' << table.corpora[c];
  out << '\n';
  auto emit = [&](std::size_t row, const char* origin) {
    const int topic_id = table.topic_ids[row];
    out << topic_id << '\t' << label_of(labels, topic_id) << '\t' << origin;
    for (std::size_t c : column_order) {
      const auto& cell = table.cells[row][c];
      out << '\t';
      if (cell.blank) {
        out << "";
      } else if (table.corpus_undefined[c]) {
        out << "NA";
      } else {
        out << fixed(cell.percent, 1);
      }
    }
    out << '\n';
  };
  for (std::size_t row : seed_rows) emit(row, "seed");
  for (std::size_t row : new_rows) emit(row, "new");
}

void write_correlations_tsv(const std::string& path, const RunConfig& config,
                            const analytics::CorrelationMatrix& matrix) {
  std::ofstream out = open_with_stamp(path, config);
  out << "corpus";
  for (const std::string& tag : matrix.corpora) out << '\t' << tag;
  out << '\n';
  for (std::size_t a = 0; a < matrix.corpora.size(); ++a) {
    out << matrix.corpora[a];
    for (std::size_t b = 0; b < matrix.corpora.size(); ++b) {
      const auto& cell = matrix.cells[a][b];
      out << '\t';
      if (!cell.defined) {
        out << "NA";
      } else {
        out << fixed(cell.rho, 2) << stars_text(cell.stars);
      }
    }
    out << '\n';
  }
  out << "# cell format: rho with */**/*** at p<0.05/0.01/0.001\n";
  for (std::size_t a = 0; a < matrix.corpora.size(); ++a) {
    for (std::size_t b = a + 1; b < matrix.corpora.size(); ++b) {
      const auto& cell = matrix.cells[a][b];
      out << "# " << matrix.corpora[a] << "|" << matrix.corpora[b] << "\tN="
          << cell.n << "\trho=" << (cell.defined ? fixed(cell.rho, 4) : "NA")
          << "\tp=" << (cell.defined ? fixed(cell.p_value, 6) : "NA") << '\n';
    }
  }
}

void write_top_words_txt(const std::string& path, const RunConfig& config,
                         const std::vector<int>& topics,
                         const std::map<int, std::string>& labels,
                         const std::map<int, std::vector<analytics::RankedTerm>>&
                             ranked_terms) {
  std::ofstream out = open_with_stamp(path, config);
  for (int topic_id : topics) {
    out << label_of(labels, topic_id) << ": ";
    const auto& terms = ranked_terms.at(topic_id);
    for (std::size_t i = 0; i < terms.size(); ++i) {
      if (i > 0) out << ", ";
      out << terms[i].text;
    }
    out << '\n';
  }
}

void write_volume_tsv(const std::string& path, const RunConfig& config,
                      const std::map<std::string, analytics::VolumeSeries>&
                          per_corpus) {
  std::ofstream out = open_with_stamp(path, config);
  out << "date\tcorpus\tmessages\n";
  for (const auto& [corpus, series] : per_corpus) {
    for (const auto& [date, count] : series.per_day) {
      out << date << '\t' << corpus << '\t' << count << '\n';
    }
  }
  for (const auto& [corpus, series] : per_corpus) {
    if (series.missing_timestamps > 0) {
      out << "# " << corpus << ": " << series.missing_timestamps
          << " record(s) without timestamp excluded\n";
    }
  }
}

void write_similarity_tsv(const std::string& path, const RunConfig& config,
                          const analytics::SimilarityGrid& grid,
                          const std::map<int, std::string>& labels) {
  std::ofstream out = open_with_stamp(path, config);
  out << "topic\tlabel\tcorpus_a\tcorpus_b\tcosine\ttokens\n";
  for (const auto& cell : grid.cells) {
    out << cell.topic_id << '\t' << label_of(labels, cell.topic_id) << '\t'
        << cell.corpus_a << '\t' << cell.corpus_b << '\t'
        << fixed(cell.cosine, 4) << '\t' << cell.token_total << '\n';
  }
  for (const auto& omitted : grid.omitted) {
    out << "# omitted\t" << omitted.topic_id << '\t' << omitted.corpus_a << '|'
        << omitted.corpus_b << '\t' << omitted.reason << '\n';
  }
}

void write_similarity_cells_jsonl(const std::string& path,
                                  const RunConfig& config,
                                  const analytics::SimilarityGrid& grid) {
  JsonlWriter writer(path, config.make_header("agenda-similarity-cells"));
  for (const auto& cell : grid.cells) {
    writer.write(Json{{"topic", cell.topic_id},
                      {"corpus_a", cell.corpus_a},
                      {"corpus_b", cell.corpus_b},
                      {"cosine", cell.cosine},
                      {"tokens", cell.token_total},
                      {"survey", cell.survey_in_pair},
                      {"fb_politicians", cell.fb_politicians_in_pair},
                      {"tw_politicians", cell.tw_politicians_in_pair},
                      {"tw_audience", cell.tw_audience_in_pair},
                      {"fb_audience", cell.fb_audience_in_pair},
                      {"same_medium", cell.same_medium},
                      {"same_actor", cell.same_actor},
                      {"topic_politics", cell.topic_is_politics},
                      {"topic_new", cell.topic_is_new}});
  }
  for (const auto& omitted : grid.omitted) {
    writer.write(Json{{"omitted", true},
                      {"topic", omitted.topic_id},
                      {"corpus_a", omitted.corpus_a},
                      {"corpus_b", omitted.corpus_b},
                      {"reason", omitted.reason}});
  }
  writer.close();
}

void write_regression_tsv(const std::string& path, const RunConfig& config,
                          const analytics::RegressionResult& result,
                          const std::string& model_name,
                          const std::vector<std::string>& dropped_constant) {
  std::ofstream out = open_with_stamp(path, config);
  out << "# model=" << model_name
      << " se=" << analytics::to_string(result.flavor) << '\n';
  if (!dropped_constant.empty()) {
    out << "# dropped constant/duplicate predictor(s):";
    for (const std::string& name : dropped_constant) out << ' ' << name;
    out << '\n';
  }
  out << "predictor\tcoefficient\trobust_se\tt\tp\tstars\n";
  for (std::size_t i = 0; i < result.names.size(); ++i) {
    out << result.names[i] << '\t' << fixed(result.coefficients[i], 6) << '\t'
        << fixed(result.robust_se[i], 6) << '\t' << fixed(result.t_values[i], 4)
        << '\t' << fixed(result.p_values[i], 6) << '\t'
        << stars_text(analytics::significance_stars(result.p_values[i]))
        << '\n';
  }
  out << "# R2=" << fixed(result.r_squared, 4)
      << " adjR2=" << fixed(result.adj_r_squared, 4) << " N=" << result.n
      << '\n';
}

}  // namespace agenda::app
