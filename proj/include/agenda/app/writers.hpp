#pragma once

#include <map>
#include <string>
#include <vector>

#include "agenda/analytics/correlation.hpp"
#include "agenda/analytics/regression.hpp"
#include "agenda/analytics/salience.hpp"
#include "agenda/analytics/similarity.hpp"
#include "agenda/analytics/topwords.hpp"
#include "agenda/analytics/volume.hpp"
#include "agenda/app/run_config.hpp"

namespace agenda::app {

// Delimited-text and plain-text report writers. Every file starts with
// comment lines carrying the run id and config hash; all numbers are printed
// with fixed formats so reruns are byte-identical.

void write_salience_tsv(const std::string& path, const RunConfig& config,
                        const analytics::SalienceTable& table,
                        const std::map<int, std::string>& labels);

void write_correlations_tsv(const std::string& path, const RunConfig& config,
                            const analytics::CorrelationMatrix& matrix);

void write_top_words_txt(const std::string& path, const RunConfig& config,
                         const std::vector<int>& topics,
                         const std::map<int, std::string>& labels,
                         const std::map<int, std::vector<analytics::RankedTerm>>&
                             ranked_terms);

void write_volume_tsv(const std::string& path, const RunConfig& config,
                      const std::map<std::string, analytics::VolumeSeries>&
                          per_corpus);

void write_similarity_tsv(const std::string& path, const RunConfig& config,
                          const analytics::SimilarityGrid& grid,
                          const std::map<int, std::string>& labels);

void write_similarity_cells_jsonl(const std::string& path,
                                  const RunConfig& config,
                                  const analytics::SimilarityGrid& grid);

void write_regression_tsv(const std::string& path, const RunConfig& config,
                          const analytics::RegressionResult& result,
                          const std::string& model_name,
                          const std::vector<std::string>& dropped_constant = {});

}  // namespace agenda::app
