#include "morandim/schedule.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <stdexcept>

namespace morandim {

namespace {

const Ratio kQuarter(1, 4);
const Ratio kEighth(1, 8);
const Ratio kSixteenth(1, 16);

std::uint64_t checked_factorial(std::uint64_t n) {
  std::uint64_t f = 1;
  for (std::uint64_t i = 2; i <= n; ++i) {
    if (f > std::numeric_limits<std::uint64_t>::max() / i)
      throw std::overflow_error("marker sequence p_i = (i+1)! exceeds uint64 at i=" +
                                std::to_string(n - 1));
    f *= i;
  }
  return f;
}

// Resolves the marker-family case containing k: ratio plus the run of
// consecutive levels [first, last] sharing it.
struct MarkerBlock {
  std::uint64_t first;
  std::uint64_t last;
  Ratio c;
};

MarkerBlock marker_block_at(const MarkerFamilySchedule& m, std::uint64_t k) {
  if (k == 0) throw std::invalid_argument("level index k must be >= 1");
  std::uint64_t p1 = m.marker(1);
  if (k <= p1) return {1, p1, kQuarter};
  for (std::size_t i = 1;; ++i) {
    std::uint64_t pi = m.marker(i);
    std::uint64_t pn = m.marker(i + 1);
    if (k <= pi + i) return {pi + 1, pi + i, kQuarter};
    if (k <= pn) return {pi + i + 1, pn, (i % 2 == 0) ? kEighth : kSixteenth};
  }
}

}  // namespace

std::uint64_t MarkerFamilySchedule::marker(std::size_t i) const {
  if (i == 0) throw std::invalid_argument("marker index is 1-based");
  if (!explicit_markers.empty()) {
    if (i > explicit_markers.size())
      throw std::out_of_range("marker sequence exhausted at i=" + std::to_string(i) +
                              " (provide more markers or use the factorial rule)");
    return explicit_markers[i - 1];
  }
  return checked_factorial(static_cast<std::uint64_t>(i) + 1);
}

Level RatioSchedule::level_at(std::uint64_t k) const {
  if (k == 0) throw std::invalid_argument("level index k must be >= 1");
  if (const auto* u = std::get_if<UniformSchedule>(&v_)) return uniform_level(u->n, u->c);
  if (const auto* ep = std::get_if<EventuallyPeriodicSchedule>(&v_)) {
    if (k <= ep->prefix.size()) return ep->prefix[k - 1];
    std::uint64_t off = (k - ep->prefix.size() - 1) % ep->cycle.size();
    return ep->cycle[off];
  }
  if (const auto* bp = std::get_if<BlockProgramSchedule>(&v_)) {
    std::uint64_t pos = 1;
    for (const auto& st : bp->stages) {
      if (st.length == 0) return st.level;  // unbounded tail
      if (k < pos + st.length) return st.level;
      pos += st.length;
    }
    throw std::out_of_range("block program does not cover level k=" + std::to_string(k) +
                            " (last stage must have length 0)");
  }
  const auto& m = std::get<MarkerFamilySchedule>(v_);
  return uniform_level(2, marker_block_at(m, k).c);
}

Ratio RatioSchedule::c_star() const {
  std::optional<Ratio> best;
  auto feed = [&best](const Level& l) {
    for (const auto& r : l.ratios)
      if (!best || r < *best) best = r;
  };
  for (const auto& l : distinct_levels()) feed(l);
  if (!best) throw std::logic_error("empty schedule");
  return *best;
}

bool RatioSchedule::uniform_per_level() const {
  for (const auto& l : distinct_levels())
    if (!l.uniform()) return false;
  return true;
}

std::vector<Level> RatioSchedule::distinct_levels() const {
  std::vector<Level> out;
  auto add = [&out](const Level& l) {
    if (std::find(out.begin(), out.end(), l) == out.end()) out.push_back(l);
  };
  if (const auto* u = std::get_if<UniformSchedule>(&v_)) {
    add(uniform_level(u->n, u->c));
  } else if (const auto* ep = std::get_if<EventuallyPeriodicSchedule>(&v_)) {
    for (const auto& l : ep->prefix) add(l);
    for (const auto& l : ep->cycle) add(l);
  } else if (const auto* bp = std::get_if<BlockProgramSchedule>(&v_)) {
    for (const auto& st : bp->stages) add(st.level);
  } else {
    add(uniform_level(2, kQuarter));
    add(uniform_level(2, kEighth));
    add(uniform_level(2, kSixteenth));
  }
  return out;
}

std::uint64_t RatioSchedule::periodic_candidates() const {
  if (const auto* ep = std::get_if<EventuallyPeriodicSchedule>(&v_))
    return ep->prefix.size() + ep->cycle.size();
  if (std::holds_alternative<UniformSchedule>(v_)) return 1;
  throw std::logic_error("periodic_candidates on a non-periodic schedule");
}

std::uint32_t ScheduleView::level_id_at(std::uint64_t k) const {
  // runs are sorted; binary search by first index
  std::size_t lo = 0, hi = runs.size();
  while (lo + 1 < hi) {
    std::size_t mid = (lo + hi) / 2;
    if (runs[mid].first <= k)
      lo = mid;
    else
      hi = mid;
  }
  if (k < runs[lo].first || k > runs[lo].last)
    throw std::out_of_range("level k=" + std::to_string(k) + " outside compiled range");
  return runs[lo].level_id;
}

ScheduleView compile_schedule(const RatioSchedule& s, std::uint64_t k_max) {
  if (k_max == 0) throw std::invalid_argument("compile_schedule: k_max must be >= 1");
  ScheduleView view;
  view.k_max = k_max;

  std::map<std::pair<std::int64_t, std::int64_t>, std::uint32_t> ratio_ids;
  auto intern_ratio = [&](const Ratio& r) -> std::uint32_t {
    auto key = std::make_pair(r.num(), r.den());
    auto it = ratio_ids.find(key);
    if (it != ratio_ids.end()) return it->second;
    std::uint32_t id = static_cast<std::uint32_t>(view.ratio_values.size());
    view.ratio_values.push_back(r.value());
    view.ratio_logs.push_back(r.log());
    view.ratio_exact.push_back(r);
    ratio_ids.emplace(key, id);
    return id;
  };

  std::vector<Level> level_keys;
  auto intern_level = [&](const Level& l) -> std::uint32_t {
    for (std::size_t i = 0; i < level_keys.size(); ++i)
      if (level_keys[i] == l) return static_cast<std::uint32_t>(i);
    ScheduleView::LevelRef ref;
    ref.n = l.n;
    ref.log_n = std::log(static_cast<double>(l.n));
    for (const auto& r : l.ratios) ref.ratio_ids.push_back(intern_ratio(r));
    level_keys.push_back(l);
    view.levels.push_back(std::move(ref));
    return static_cast<std::uint32_t>(level_keys.size() - 1);
  };

  auto push_run = [&](std::uint64_t first, std::uint64_t last, const Level& l) {
    std::uint32_t id = intern_level(l);
    if (!view.runs.empty() && view.runs.back().level_id == id &&
        view.runs.back().last + 1 == first) {
      view.runs.back().last = last;
      return;
    }
    view.runs.push_back({first, last, id});
  };

  const auto& v = s.variant();
  if (const auto* u = std::get_if<UniformSchedule>(&v)) {
    push_run(1, k_max, uniform_level(u->n, u->c));
  } else if (const auto* ep = std::get_if<EventuallyPeriodicSchedule>(&v)) {
    std::uint64_t k = 1;
    for (const auto& l : ep->prefix) {
      if (k > k_max) break;
      push_run(k, k, l);
      ++k;
    }
    while (k <= k_max) {
      std::uint64_t off = (k - ep->prefix.size() - 1) % ep->cycle.size();
      push_run(k, k, ep->cycle[off]);
      ++k;
    }
  } else if (const auto* bp = std::get_if<BlockProgramSchedule>(&v)) {
    std::uint64_t pos = 1;
    for (const auto& st : bp->stages) {
      if (pos > k_max) break;
      std::uint64_t last = st.length == 0 ? k_max : std::min(k_max, pos + st.length - 1);
      push_run(pos, last, st.level);
      pos = last + 1;
      if (st.length == 0) break;
    }
    if (pos <= k_max)
      throw std::out_of_range("block program does not cover level k=" + std::to_string(pos));
  } else {
    const auto& m = std::get<MarkerFamilySchedule>(v);
    std::uint64_t k = 1;
    while (k <= k_max) {
      MarkerBlock b = marker_block_at(m, k);
      push_run(k, std::min(b.last, k_max), uniform_level(2, b.c));
      k = b.last + 1;
    }
  }
  return view;
}

double Perturbation::at(std::uint64_t k) const {
  if (k == 0) throw std::invalid_argument("perturbation index k must be >= 1");
  if (const auto* g = std::get_if<GeometricPerturbation>(&v_))
    return g->amplitude * std::pow(g->decay, static_cast<double>(k));
  const auto& f = std::get<FinitePerturbation>(v_);
  return k <= f.values.size() ? f.values[k - 1] : 0.0;
}

double Perturbation::sup() const {
  if (const auto* g = std::get_if<GeometricPerturbation>(&v_)) return g->amplitude * g->decay;
  const auto& f = std::get<FinitePerturbation>(v_);
  double m = 0.0;
  for (double a : f.values) m = std::max(m, a);
  return m;
}

}  // namespace morandim
