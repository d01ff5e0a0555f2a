#include "morandim/report.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>
#include <stdexcept>

namespace morandim {

std::string fmt_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::string report_text(const DimensionReport& r, const std::string& source) {
  std::ostringstream os;
  os << "== dimension report ==\n";
  if (!source.empty()) os << "source: " << source << "\n";
  os << "ambient d: " << r.d << "\n";
  os << "solver tolerance: " << fmt_double(r.tol) << "\n";
  os << "horizons: m_max=" << r.horizon_m << " k_scan=" << r.horizon_k
     << " tail=[" << r.tail_lo << "," << r.tail_horizon << "]\n";
  os << "s*  (tail min estimate): " << fmt_double(r.s_lower) << "\n";
  os << "s^* (tail max estimate): " << fmt_double(r.s_upper) << "\n";
  os << "s** (upper estimate):    " << fmt_double(r.s_assouad)
     << "  (running inf of theta_m; gap " << fmt_double(r.convergence_gap) << ")\n";
  if (r.sup_truncated)
    os << "warning: sup over window starts truncated at k_scan=" << r.horizon_k << "\n";
  for (const auto& n : r.notes) os << "note: " << n << "\n";
  return os.str();
}

std::string theta_trace_csv(const DimensionReport& r) {
  std::ostringstream os;
  os << "m,theta_m,running_inf\n";
  auto inf = r.running_inf();
  for (std::size_t i = 0; i < r.theta_trace.size(); ++i)
    os << r.theta_trace[i].first << "," << fmt_double(r.theta_trace[i].second) << ","
       << fmt_double(inf[i]) << "\n";
  return os.str();
}

std::string predims_csv(const PreDimensions& p) {
  std::ostringstream os;
  os << "m,s_0m\n";
  for (std::size_t i = 0; i < p.trace.size(); ++i)
    os << (i + 1) << "," << fmt_double(p.trace[i]) << "\n";
  return os.str();
}

std::string estimator_csv(const EstimatorResult& r) {
  std::ostringstream os;
  os << "rho,R,x,N,t\n";
  for (const auto& row : r.rows)
    os << fmt_double(row.rho) << "," << fmt_double(row.R) << "," << fmt_double(row.x) << ","
       << row.N << "," << fmt_double(row.t) << "\n";
  return os.str();
}

std::string intervals_csv(const IntervalSet& s) {
  std::ostringstream os;
  os << "# " << s.meta() << "\n";
  os << "a,b\n";
  for (const auto& iv : s.intervals())
    os << fmt_double(iv.a) << "," << fmt_double(iv.b) << "\n";
  return os.str();
}

IntervalSet parse_intervals_csv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  std::string meta;
  std::vector<Interval> ivs;
  std::uint64_t depth = 0;
  bool header_seen = false;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    if (line[0] == '#') {
      meta = line.substr(1);
      auto dpos = meta.find("depth=");
      if (dpos != std::string::npos)
        depth = std::strtoull(meta.c_str() + dpos + 6, nullptr, 10);
      continue;
    }
    if (!header_seen) {
      if (line.rfind("a,b", 0) != 0)
        throw std::invalid_argument("intervals CSV: expected header 'a,b' at line " +
                                    std::to_string(lineno));
      header_seen = true;
      continue;
    }
    double a, b;
    if (std::sscanf(line.c_str(), "%lf,%lf", &a, &b) != 2)
      throw std::invalid_argument("intervals CSV: bad row at line " + std::to_string(lineno));
    ivs.push_back({a, b});
  }
  return IntervalSet(std::move(ivs), depth, meta);
}

std::string scale_csv(const ScaleFunction& h) {
  std::ostringstream os;
  os << "r,log_r,h\n";
  for (std::size_t i = 0; i < h.pieces(); ++i) {
    double x = h.breakpoint_x()[i];
    os << fmt_double(std::exp(-x)) << "," << fmt_double(-x) << ","
       << fmt_double(h.values()[i]) << "\n";
  }
  return os.str();
}

ScaleFunction parse_scale_csv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  std::vector<double> xs, hs;
  bool header_seen = false;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty() || line[0] == '#') continue;
    if (!header_seen) {
      if (line.rfind("r,log_r,h", 0) != 0)
        throw std::invalid_argument("scale CSV: expected header 'r,log_r,h' at line " +
                                    std::to_string(lineno));
      header_seen = true;
      continue;
    }
    double r, lr, hv;
    if (std::sscanf(line.c_str(), "%lf,%lf,%lf", &r, &lr, &hv) != 3)
      throw std::invalid_argument("scale CSV: bad row at line " + std::to_string(lineno));
    xs.push_back(-lr);  // log_r column survives underflowed r
    hs.push_back(hv);
  }
  return ScaleFunction(std::move(xs), std::move(hs));
}

std::string psi_table_csv(const ScaleEstimate& e) {
  std::ostringstream os;
  os << "rho,R,sup_psi\n";
  for (const auto& row : e.sup_by_rho)
    os << fmt_double(row.rho) << "," << fmt_double(row.R) << "," << fmt_double(row.sup_psi)
       << "\n";
  return os.str();
}

std::string cutset_csv(const Cutset& c) {
  std::ostringstream os;
  os << "# base=" << c.base.str() << " delta=" << c.delta.str()
     << " exact=" << (c.exact ? 1 : 0) << " near_tie=" << (c.near_tie ? 1 : 0) << "\n";
  os << "word,log_c\n";
  for (const auto& m : c.members) os << m.str() << "," << fmt_double(m.log_c) << "\n";
  return os.str();
}

std::string classes_csv(const DyadicClasses& c) {
  std::ostringstream os;
  os << "p,count\n";
  for (const auto& [p, n] : c.counts) os << p << "," << n << "\n";
  return os.str();
}

std::string overlap_csv(const OverlapResult& r) {
  std::ostringstream os;
  os << "delta,max_overlap\n";
  for (const auto& [d, n] : r.per_delta) os << fmt_double(d) << "," << n << "\n";
  return os.str();
}

}  // namespace morandim
