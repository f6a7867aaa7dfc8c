#include "lastmile/transition.hpp"

#include <cmath>

#include "lastmile/errors.hpp"
#include "json.hpp"

namespace lastmile {

double QualityWeights::weight(Quality q) const {
  switch (q) {
    case Quality::high: return high;
    case Quality::medium: return medium;
    case Quality::low: return low;
  }
  throw InvalidInput("unknown quality value");
}

Matrix count_transitions(const std::vector<RoutingInstance>& instances,
                         const ZoneIndex& zones, const QualityWeights& weights,
                         bool include_return_arc) {
  Matrix counts = Matrix::square(zones.size(), 0.0);
  for (const RoutingInstance& inst : instances) {
    if (!inst.quality || !inst.actual_sequence) continue;
    const double w = weights.weight(*inst.quality);
    const std::vector<std::string> seq = zone_sequence_of(inst);
    std::vector<std::size_t> idx;
    idx.reserve(seq.size());
    for (const std::string& z : seq) idx.push_back(zones.at(z));
    for (std::size_t i = 0; i + 1 < idx.size(); ++i) counts(idx[i], idx[i + 1]) += w;
    if (include_return_arc && !idx.empty()) counts(idx.back(), idx.front()) += w;
  }
  return counts;
}

Matrix normalize_rows(const Matrix& counts, double floor) {
  require_square(counts, "count matrix");
  const std::size_t m = counts.rows();
  if (m == 0) throw InvalidInput("count matrix is empty");
  if (floor <= 0.0 || floor * static_cast<double>(m) >= 1.0)
    throw InvalidInput("probability floor must satisfy 0 < floor * cols < 1");

  Matrix p = Matrix::square(m, 0.0);
  std::vector<double> raw(m);
  for (std::size_t i = 0; i < m; ++i) {
    double total = 0.0;
    for (std::size_t j = 0; j < m; ++j) {
      raw[j] = counts(i, j);
      if (!std::isfinite(raw[j]) || raw[j] < 0.0)
        throw InvalidInput("count matrix entries must be finite and nonnegative");
      total += raw[j];
    }
    if (total == 0.0) {
      for (std::size_t j = 0; j < m; ++j) raw[j] = 1.0;
      total = static_cast<double>(m);
    }

    // Scale to a distribution, pin entries that fall under the floor, and
    // rescale the remaining mass; pinning can push further entries below
    // the floor, hence the loop.
    std::vector<bool> pinned(m, false);
    while (true) {
      std::size_t n_pinned = 0;
      double unpinned_sum = 0.0;
      for (std::size_t j = 0; j < m; ++j) {
        if (pinned[j]) {
          ++n_pinned;
        } else {
          unpinned_sum += raw[j];
        }
      }
      const double target = 1.0 - floor * static_cast<double>(n_pinned);
      bool changed = false;
      for (std::size_t j = 0; j < m; ++j) {
        if (pinned[j]) {
          p(i, j) = floor;
          continue;
        }
        p(i, j) = raw[j] / unpinned_sum * target;
        if (p(i, j) < floor) {
          pinned[j] = true;
          changed = true;
        }
      }
      if (!changed) break;
    }
  }
  return p;
}

Matrix neg_log(const Matrix& p) {
  Matrix out(p.rows(), p.cols(), 0.0);
  for (std::size_t i = 0; i < p.rows(); ++i)
    for (std::size_t j = 0; j < p.cols(); ++j) {
      if (!(p(i, j) > 0.0))
        throw InvalidInput("neg_log requires strictly positive entries");
      out(i, j) = -std::log(p(i, j));
    }
  return out;
}

TransitionMatrix estimate_transitions(const std::vector<RoutingInstance>& instances,
                                      const ZoneIndex& zones,
                                      const QualityWeights& weights, double floor,
                                      bool include_return_arc) {
  Matrix counts = count_transitions(instances, zones, weights, include_return_arc);
  return {zones, normalize_rows(counts, floor), floor};
}

Matrix slice_transitions(const TransitionMatrix& t, const ZoneIndex& zones) {
  require_square(t.p, "transition matrix");
  if (t.p.rows() != t.zone_index.size())
    throw InvalidInput("transition matrix does not match its zone index");
  const std::size_t m = zones.size();
  Matrix sub = Matrix::square(m, 0.0);
  std::vector<std::size_t> map(m);
  for (std::size_t i = 0; i < m; ++i) map[i] = t.zone_index.at(zones.id(i));
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < m; ++j) sub(i, j) = t.p(map[i], map[j]);
  return sub;
}

std::string transition_to_json(const TransitionMatrix& t) {
  nlohmann::json doc;
  doc["floor"] = t.floor;
  doc["zones"] = t.zone_index.ids();
  nlohmann::json rows = nlohmann::json::array();
  for (std::size_t i = 0; i < t.p.rows(); ++i) {
    nlohmann::json row = nlohmann::json::array();
    for (std::size_t j = 0; j < t.p.cols(); ++j) row.push_back(t.p(i, j));
    rows.push_back(std::move(row));
  }
  doc["p"] = std::move(rows);
  return doc.dump();
}

TransitionMatrix transition_from_json(const std::string& text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("transition matrix: ") + e.what());
  }
  try {
    TransitionMatrix t;
    t.floor = doc.at("floor").get<double>();
    t.zone_index = ZoneIndex(doc.at("zones").get<std::vector<std::string>>());
    const auto& rows = doc.at("p");
    const std::size_t m = t.zone_index.size();
    if (rows.size() != m) throw ParseError("transition matrix: row count mismatch");
    t.p = Matrix::square(m, 0.0);
    for (std::size_t i = 0; i < m; ++i) {
      if (rows[i].size() != m) throw ParseError("transition matrix: column count mismatch");
      for (std::size_t j = 0; j < m; ++j) t.p(i, j) = rows[i][j].get<double>();
    }
    return t;
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("transition matrix: ") + e.what());
  }
}

}  // namespace lastmile
