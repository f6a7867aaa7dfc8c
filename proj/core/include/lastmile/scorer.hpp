#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "lastmile/matrix.hpp"
#include "lastmile/types.hpp"

namespace lastmile {

/// Rank-disorder of B against A, depot excluded from ranks:
/// SD = 2/(c(c-1)) * sum over consecutive B pairs of (|rank gap| - 1),
/// where c is the number of non-depot stops. Sequences must be depot-first
/// permutations of the same stop set with c >= 2.
double sequence_deviation(const std::vector<std::size_t>& a,
                          const std::vector<std::size_t>& b);

struct ErpResult {
  double cost = 0.0;
  std::size_t edits = 0;
};

/// Edit distance with real penalty between the two sequences. Element
/// distance is the travel time normalized by the matrix maximum; gaps align
/// against the depot (index 0). Among minimum-cost alignments the one with
/// the fewest non-match operations wins.
ErpResult erp(const std::vector<std::size_t>& a, const std::vector<std::size_t>& b,
              const Matrix& travel_times);

struct ScoreRow {
  std::string route_id;
  std::string quality;
  double sd = 0.0;
  double erp_norm = 0.0;
  std::size_t erp_edits = 0;
  double score = 0.0;
};

/// score = sd * erp_norm / erp_edits, or 0 when the alignment needs no
/// edits. Lower is better; identical sequences score 0. Requires
/// actual_sequence.
ScoreRow score_stops(const RoutingInstance& inst, const Tour& predicted);

/// Same machinery over zone sequences: ranks from zone ids, element
/// distance from normalized zone-centroid distances. `actual` and
/// `predicted` are zone index sequences rooted at the station pseudo-zone.
ScoreRow score_zones(const std::string& route_id,
                     const std::vector<std::size_t>& actual,
                     const std::vector<std::size_t>& predicted,
                     const Matrix& centroid_distances);

double mean_score(const std::vector<ScoreRow>& rows);

/// CSV with header: route_id,quality,sd,erp_norm,erp_edits,score.
std::string score_csv(const std::vector<ScoreRow>& rows);

/// Aggregate JSON: count, mean/min/max score, mean per quality label.
std::string score_summary_json(const std::vector<ScoreRow>& rows);

/// Fixed-width histogram of scores over [0, max]; the last bin absorbs the
/// maximum. CSV with header: bin_low,bin_high,count.
std::string score_histogram_csv(const std::vector<ScoreRow>& rows, std::size_t bins,
                                double max_score);

}  // namespace lastmile
