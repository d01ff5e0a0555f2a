#include "morandim/validation.hpp"

#include <cmath>
#include <sstream>

namespace morandim {

namespace {

void add(ValidationReport& r, Severity sev, std::string check,
         std::optional<std::uint64_t> level, std::string msg) {
  r.entries.push_back({sev, std::move(check), level, std::move(msg)});
}

// Checks one level shape against the structure conditions: n_k >= 2,
// ratios in (0,1), sum_j c_{k,j}^d <= 1. `where` is a representative level
// index for the message (the shape may repeat).
void check_level(ValidationReport& r, const Level& l, int d, std::uint64_t where) {
  if (l.n < 2) {
    add(r, Severity::Error, "branch-count", where,
        "n_k = " + std::to_string(l.n) + " < 2");
    return;
  }
  if (static_cast<int>(l.ratios.size()) != l.n) {
    add(r, Severity::Error, "ratio-arity", where,
        "level lists " + std::to_string(l.ratios.size()) + " ratios for n_k = " +
            std::to_string(l.n));
    return;
  }
  for (const auto& c : l.ratios) {
    if (!(c > Ratio(0) && c < Ratio(1))) {
      add(r, Severity::Error, "ratio-range", where, "c_{k,j} = " + c.str() + " outside (0,1)");
      return;
    }
  }
  // exact sum when the checked arithmetic stays in range
  std::optional<Ratio> sum = Ratio(0);
  for (const auto& c : l.ratios) {
    if (!sum) break;
    auto p = c.checked_pow(d);
    sum = p ? sum->checked_add(*p) : std::nullopt;
  }
  if (sum) {
    if (*sum > Ratio(1)) {
      add(r, Severity::Error, "measure-sum", where,
          "sum_j c_{k,j}^d = " + sum->str() + " > 1");
    }
    return;
  }
  double fsum = 0.0;
  for (const auto& c : l.ratios) fsum += std::pow(c.value(), d);
  if (fsum > 1.0 + 1e-12) {
    add(r, Severity::Error, "measure-sum", where,
        "sum_j c_{k,j}^d = " + std::to_string(fsum) + " > 1");
  } else {
    add(r, Severity::Info, "measure-sum", where,
        "sum_j c_{k,j}^d verified in floating point only (rational overflow)");
  }
}

void check_schedule_common(ValidationReport& r, const RatioSchedule& s, int d) {
  if (const auto* ep = s.get_if<EventuallyPeriodicSchedule>()) {
    if (ep->cycle.empty()) {
      add(r, Severity::Error, "cycle-empty", std::nullopt, "eventually-periodic cycle is empty");
      return;
    }
    std::uint64_t k = 1;
    for (const auto& l : ep->prefix) check_level(r, l, d, k++);
    for (const auto& l : ep->cycle) check_level(r, l, d, k++);
    return;
  }
  if (const auto* bp = s.get_if<BlockProgramSchedule>()) {
    if (bp->stages.empty()) {
      add(r, Severity::Error, "stages-empty", std::nullopt, "block program has no stages");
      return;
    }
    std::uint64_t k = 1;
    for (std::size_t i = 0; i < bp->stages.size(); ++i) {
      const auto& st = bp->stages[i];
      if (st.length == 0 && i + 1 != bp->stages.size()) {
        add(r, Severity::Error, "stage-length", k,
            "stage with length 0 (unbounded) must be last");
      }
      check_level(r, st.level, d, k);
      k += st.length == 0 ? 1 : st.length;
    }
    if (bp->stages.back().length != 0) {
      add(r, Severity::Error, "stage-tail", std::nullopt,
          "final stage must have length 0 so the schedule covers all levels");
    }
    return;
  }
  if (const auto* m = s.get_if<MarkerFamilySchedule>()) {
    // marker gaps: p_{i+1} - p_i > i for all presented (or generated) i
    std::size_t checkable =
        m->explicit_markers.empty() ? 12 : m->explicit_markers.size() - 1;
    for (std::size_t i = 1; i <= checkable; ++i) {
      std::uint64_t pi = 0, pn = 0;
      try {
        pi = m->marker(i);
        pn = m->marker(i + 1);
      } catch (const std::exception&) {
        break;  // factorial overflow horizon; preceding gaps already checked
      }
      if (pn <= pi + i) {
        add(r, Severity::Error, "marker-gap", std::nullopt,
            "p_" + std::to_string(i + 1) + " - p_" + std::to_string(i) + " = " +
                std::to_string(pn - pi) + " <= i = " + std::to_string(i));
      }
    }
    if (!m->explicit_markers.empty() && m->explicit_markers.front() < 1)
      add(r, Severity::Error, "marker-range", std::nullopt, "p_1 must be >= 1");
    add(r, Severity::Info, "marker-head", std::nullopt,
        "levels k <= p_1 use ratio 1/4 (the construction leaves them free)");
    std::uint64_t k = 1;
    for (const auto& l : s.distinct_levels()) check_level(r, l, d, k++);
    return;
  }
  const auto* u = s.get_if<UniformSchedule>();
  check_level(r, uniform_level(u->n, u->c), d, 1);
}

}  // namespace

ValidationReport validate(const MoranSpec& spec) {
  ValidationReport r;
  if (spec.d < 1) {
    add(r, Severity::Error, "ambient-dimension", std::nullopt,
        "d = " + std::to_string(spec.d) + " must be a positive integer");
    return r;
  }
  check_schedule_common(r, spec.schedule, spec.d);
  if (!r.ok()) return r;
  Ratio cs = spec.schedule.c_star();
  if (!cs.positive()) {
    add(r, Severity::Error, "c-star", std::nullopt, "c_* = " + cs.str() + " is not > 0");
    return r;
  }
  add(r, Severity::Info, "c-star", std::nullopt, "c_* = " + cs.str());
  return r;
}

ValidationReport validate(const CantorLikeSpec& spec) {
  ValidationReport r;
  check_schedule_common(r, spec.schedule, 1);
  if (!r.ok()) return r;

  if (!spec.schedule.uniform_per_level()) {
    add(r, Severity::Error, "cantor-uniform", std::nullopt,
        "Cantor-like schedules need a single ratio value per level");
    return r;
  }
  if (const auto* g = std::get_if<GeometricPerturbation>(&spec.perturbation.variant())) {
    if (g->amplitude < 0)
      add(r, Severity::Error, "perturbation-range", std::nullopt, "amplitude A < 0");
    if (!(g->decay > 0.0 && g->decay < 1.0))
      add(r, Severity::Error, "perturbation-range", std::nullopt,
          "decay gamma outside (0,1)");
  } else {
    const auto& f = std::get<FinitePerturbation>(spec.perturbation.variant());
    for (std::size_t i = 0; i < f.values.size(); ++i)
      if (f.values[i] < 0)
        add(r, Severity::Error, "perturbation-range", i + 1, "a_k < 0");
  }
  if (!r.ok()) return r;

  // realizability: c_k(1+a_k) in (0,1) and n_k c_k (1+a_k) <= 1. The worst
  // a_k is a_1 for geometric decay; finite lists are checked element-wise.
  auto check_realizable = [&r, &spec](const Level& l, std::uint64_t k, double a) {
    double c = l.ratios.front().value();
    double hi = c * (1.0 + a);
    if (hi >= 1.0)
      add(r, Severity::Error, "cantor-band", k, "c_k(1+a_k) >= 1");
    if (l.n * hi > 1.0 + 1e-15)
      add(r, Severity::Error, "cantor-realizable", k,
          "n_k * c_k (1+a_k) = " + std::to_string(l.n * hi) + " > 1");
  };
  double a_sup = spec.perturbation.sup();
  std::uint64_t k = 1;
  for (const auto& l : spec.schedule.distinct_levels()) check_realizable(l, k++, a_sup);
  if (const auto* f = std::get_if<FinitePerturbation>(&spec.perturbation.variant())) {
    for (std::size_t i = 0; i < f->values.size(); ++i)
      check_realizable(spec.schedule.level_at(i + 1), i + 1, f->values[i]);
  }
  if (!r.ok()) return r;
  add(r, Severity::Info, "c-star", std::nullopt, "c_* = " + spec.schedule.c_star().str());
  return r;
}

std::string to_text(const ValidationReport& report) {
  std::ostringstream os;
  for (const auto& e : report.entries) {
    const char* sev = e.severity == Severity::Error     ? "error"
                      : e.severity == Severity::Warning ? "warning"
                                                        : "info";
    os << sev << " [" << e.check << "]";
    if (e.level) os << " level " << *e.level;
    os << ": " << e.message << "\n";
  }
  os << (report.ok() ? "spec admissible" : "spec rejected") << " ("
     << report.error_count() << " errors)\n";
  return os.str();
}

}  // namespace morandim
