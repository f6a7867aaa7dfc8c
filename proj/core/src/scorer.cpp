#include "lastmile/scorer.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <map>

#include "lastmile/errors.hpp"
#include "json.hpp"

namespace lastmile {

namespace {

void check_comparable(const std::vector<std::size_t>& a, const std::vector<std::size_t>& b) {
  if (a.empty() || b.empty()) throw InvalidInput("cannot score empty sequences");
  if (a[0] != 0 || b[0] != 0) throw InvalidInput("sequences must start at the depot");
  if (a.size() != b.size())
    throw InvalidInput("sequences differ in length: " + std::to_string(a.size()) +
                       " vs " + std::to_string(b.size()));
  std::vector<std::size_t> sa = a;
  std::vector<std::size_t> sb = b;
  std::sort(sa.begin(), sa.end());
  std::sort(sb.begin(), sb.end());
  if (sa != sb) throw InvalidInput("sequences are not permutations of the same stops");
  for (std::size_t i = 1; i < sa.size(); ++i)
    if (sa[i] == sa[i - 1]) throw InvalidInput("sequence repeats a stop");
}

std::string format_number(double v) {
  char buf[32];
  auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

}  // namespace

double sequence_deviation(const std::vector<std::size_t>& a,
                          const std::vector<std::size_t>& b) {
  check_comparable(a, b);
  const std::size_t c = a.size() - 1;
  if (c < 2) return 0.0;

  // rank over non-depot stops: position 1..c within A.
  std::size_t max_stop = 0;
  for (std::size_t v : a) max_stop = std::max(max_stop, v);
  std::vector<std::size_t> rank(max_stop + 1, 0);
  for (std::size_t i = 1; i < a.size(); ++i) rank[a[i]] = i;

  double sum = 0.0;
  for (std::size_t i = 1; i + 1 < b.size(); ++i) {
    const double gap = std::fabs(static_cast<double>(rank[b[i + 1]]) -
                                 static_cast<double>(rank[b[i]]));
    sum += gap - 1.0;
  }
  return 2.0 / (static_cast<double>(c) * static_cast<double>(c - 1)) * sum;
}

ErpResult erp(const std::vector<std::size_t>& a, const std::vector<std::size_t>& b,
              const Matrix& travel_times) {
  check_comparable(a, b);
  require_square(travel_times, "travel times");
  if (!travel_times.all_finite()) throw InvalidInput("travel times must be finite");
  const double max_t = travel_times.max_abs();
  const double norm = max_t > 0.0 ? max_t : 1.0;
  const auto dist = [&](std::size_t x, std::size_t y) {
    return travel_times(x, y) / norm;
  };
  // Gap alignments substitute the depot for the missing element.
  const auto gap = [&](std::size_t x) { return travel_times(x, 0) / norm; };

  struct Cell {
    double cost;
    std::size_t edits;
  };
  const auto better = [](const Cell& p, const Cell& q) {
    return p.cost < q.cost || (p.cost == q.cost && p.edits < q.edits);
  };

  const std::size_t la = a.size();
  const std::size_t lb = b.size();
  std::vector<Cell> dp((la + 1) * (lb + 1));
  const auto at = [&](std::size_t i, std::size_t j) -> Cell& { return dp[i * (lb + 1) + j]; };

  at(0, 0) = {0.0, 0};
  for (std::size_t i = 1; i <= la; ++i)
    at(i, 0) = {at(i - 1, 0).cost + gap(a[i - 1]), at(i - 1, 0).edits + 1};
  for (std::size_t j = 1; j <= lb; ++j)
    at(0, j) = {at(0, j - 1).cost + gap(b[j - 1]), at(0, j - 1).edits + 1};

  for (std::size_t i = 1; i <= la; ++i) {
    for (std::size_t j = 1; j <= lb; ++j) {
      const bool match = a[i - 1] == b[j - 1];
      Cell best{at(i - 1, j - 1).cost + dist(a[i - 1], b[j - 1]),
                at(i - 1, j - 1).edits + (match ? 0 : 1)};
      const Cell del{at(i - 1, j).cost + gap(a[i - 1]), at(i - 1, j).edits + 1};
      if (better(del, best)) best = del;
      const Cell ins{at(i, j - 1).cost + gap(b[j - 1]), at(i, j - 1).edits + 1};
      if (better(ins, best)) best = ins;
      at(i, j) = best;
    }
  }
  return {at(la, lb).cost, at(la, lb).edits};
}

namespace {

ScoreRow combine(std::string route_id, std::string quality,
                 const std::vector<std::size_t>& actual,
                 const std::vector<std::size_t>& predicted, const Matrix& times) {
  ScoreRow row;
  row.route_id = std::move(route_id);
  row.quality = std::move(quality);
  row.sd = sequence_deviation(actual, predicted);
  const ErpResult e = erp(actual, predicted, times);
  row.erp_norm = e.cost;
  row.erp_edits = e.edits;
  row.score = e.edits > 0 ? row.sd * row.erp_norm / static_cast<double>(e.edits) : 0.0;
  return row;
}

}  // namespace

ScoreRow score_stops(const RoutingInstance& inst, const Tour& predicted) {
  if (!inst.actual_sequence)
    throw MissingLabel("route '" + inst.route_id + "' has no actual_sequence");
  validate_tour(predicted, inst.stops.size());
  return combine(inst.route_id, inst.quality ? to_string(*inst.quality) : "",
                 *inst.actual_sequence, predicted.order, inst.travel_times);
}

ScoreRow score_zones(const std::string& route_id, const std::vector<std::size_t>& actual,
                     const std::vector<std::size_t>& predicted,
                     const Matrix& centroid_distances) {
  return combine(route_id, "", actual, predicted, centroid_distances);
}

double mean_score(const std::vector<ScoreRow>& rows) {
  if (rows.empty()) throw InvalidInput("no scores to average");
  double sum = 0.0;
  for (const ScoreRow& r : rows) sum += r.score;
  return sum / static_cast<double>(rows.size());
}

std::string score_csv(const std::vector<ScoreRow>& rows) {
  std::string out = "route_id,quality,sd,erp_norm,erp_edits,score\n";
  for (const ScoreRow& r : rows) {
    out += r.route_id;
    out += ',' + r.quality;
    out += ',' + format_number(r.sd);
    out += ',' + format_number(r.erp_norm);
    out += ',' + std::to_string(r.erp_edits);
    out += ',' + format_number(r.score);
    out += '\n';
  }
  return out;
}

std::string score_summary_json(const std::vector<ScoreRow>& rows) {
  nlohmann::json doc;
  doc["count"] = rows.size();
  if (!rows.empty()) {
    double lo = rows.front().score;
    double hi = rows.front().score;
    for (const ScoreRow& r : rows) {
      lo = std::min(lo, r.score);
      hi = std::max(hi, r.score);
    }
    doc["mean_score"] = mean_score(rows);
    doc["min_score"] = lo;
    doc["max_score"] = hi;

    std::map<std::string, std::vector<double>> by_label;
    for (const ScoreRow& r : rows)
      if (!r.quality.empty()) by_label[r.quality].push_back(r.score);
    nlohmann::json per_label;
    for (const auto& [label, scores] : by_label) {
      double sum = 0.0;
      for (double s : scores) sum += s;
      per_label[label] = sum / static_cast<double>(scores.size());
    }
    doc["mean_score_by_quality"] = std::move(per_label);
  }
  return doc.dump();
}

std::string score_histogram_csv(const std::vector<ScoreRow>& rows, std::size_t bins,
                                double max_score) {
  if (bins == 0) throw InvalidInput("histogram needs at least one bin");
  if (!(max_score > 0.0)) throw InvalidInput("histogram upper bound must be positive");
  std::vector<std::size_t> counts(bins, 0);
  const double width = max_score / static_cast<double>(bins);
  for (const ScoreRow& r : rows) {
    std::size_t b = bins - 1;
    if (r.score < max_score) b = static_cast<std::size_t>(r.score / width);
    if (b >= bins) b = bins - 1;
    counts[b]++;
  }
  std::string out = "bin_low,bin_high,count\n";
  for (std::size_t b = 0; b < bins; ++b) {
    out += format_number(width * static_cast<double>(b));
    out += ',' + format_number(width * static_cast<double>(b + 1));
    out += ',' + std::to_string(counts[b]);
    out += '\n';
  }
  return out;
}

}  // namespace lastmile
