#include "morandim/spec_io.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

namespace morandim {

namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& path, const std::string& why) {
  throw SpecParseError("spec field '" + path + "': " + why, path);
}

Ratio ratio_field(const json& j, const std::string& path) {
  try {
    if (j.is_string()) return Ratio::parse(j.get<std::string>());
    if (j.is_number_integer()) return Ratio(j.get<std::int64_t>());
    if (j.is_number_float()) return Ratio::from_double(j.get<double>());
  } catch (const std::exception& e) {
    fail(path, e.what());
  }
  fail(path, "expected a ratio (number or \"a/b\" string)");
}

Level level_field(const json& j, const std::string& path) {
  if (!j.is_object()) fail(path, "expected a level object");
  Level l;
  if (!j.contains("n") || !j["n"].is_number_integer()) fail(path + ".n", "expected an integer");
  l.n = j["n"].get<int>();
  if (j.contains("c")) {
    l.ratios.assign(static_cast<std::size_t>(std::max(0, l.n)),
                    ratio_field(j["c"], path + ".c"));
  } else if (j.contains("ratios")) {
    const auto& arr = j["ratios"];
    if (!arr.is_array()) fail(path + ".ratios", "expected an array");
    for (std::size_t i = 0; i < arr.size(); ++i)
      l.ratios.push_back(ratio_field(arr[i], path + ".ratios[" + std::to_string(i) + "]"));
  } else {
    fail(path, "level needs 'c' or 'ratios'");
  }
  return l;
}

RatioSchedule schedule_field(const json& j, const std::string& path) {
  if (!j.is_object() || !j.contains("kind") || !j["kind"].is_string())
    fail(path + ".kind", "expected a schedule kind string");
  std::string kind = j["kind"].get<std::string>();
  if (kind == "uniform") {
    UniformSchedule u;
    if (!j.contains("n") || !j["n"].is_number_integer())
      fail(path + ".n", "expected an integer");
    u.n = j["n"].get<int>();
    if (!j.contains("c")) fail(path + ".c", "missing ratio");
    u.c = ratio_field(j["c"], path + ".c");
    return RatioSchedule(u);
  }
  if (kind == "eventually_periodic") {
    EventuallyPeriodicSchedule ep;
    if (j.contains("prefix")) {
      const auto& arr = j["prefix"];
      if (!arr.is_array()) fail(path + ".prefix", "expected an array of levels");
      for (std::size_t i = 0; i < arr.size(); ++i)
        ep.prefix.push_back(level_field(arr[i], path + ".prefix[" + std::to_string(i) + "]"));
    }
    if (!j.contains("cycle") || !j["cycle"].is_array() || j["cycle"].empty())
      fail(path + ".cycle", "expected a nonempty array of levels");
    for (std::size_t i = 0; i < j["cycle"].size(); ++i)
      ep.cycle.push_back(level_field(j["cycle"][i], path + ".cycle[" + std::to_string(i) + "]"));
    return RatioSchedule(ep);
  }
  if (kind == "block_program") {
    BlockProgramSchedule bp;
    if (!j.contains("stages") || !j["stages"].is_array() || j["stages"].empty())
      fail(path + ".stages", "expected a nonempty array of stages");
    for (std::size_t i = 0; i < j["stages"].size(); ++i) {
      const auto& sj = j["stages"][i];
      std::string sp = path + ".stages[" + std::to_string(i) + "]";
      BlockStage st;
      if (!sj.contains("length") || !sj["length"].is_number_unsigned())
        fail(sp + ".length", "expected a nonnegative integer (0 = unbounded tail)");
      st.length = sj["length"].get<std::uint64_t>();
      st.level = level_field(sj, sp);
      bp.stages.push_back(std::move(st));
    }
    return RatioSchedule(bp);
  }
  if (kind == "example1") {
    MarkerFamilySchedule m;
    if (j.contains("markers") && !j["markers"].is_string()) {
      const auto& arr = j["markers"];
      if (!arr.is_array()) fail(path + ".markers", "expected \"factorial\" or an array");
      for (std::size_t i = 0; i < arr.size(); ++i) {
        if (!arr[i].is_number_unsigned())
          fail(path + ".markers[" + std::to_string(i) + "]", "expected a positive integer");
        m.explicit_markers.push_back(arr[i].get<std::uint64_t>());
      }
    } else if (j.contains("markers") && j["markers"].get<std::string>() != "factorial") {
      fail(path + ".markers", "unknown marker rule '" + j["markers"].get<std::string>() + "'");
    }
    return RatioSchedule(m);
  }
  fail(path + ".kind", "unknown schedule kind '" + kind + "'");
}

Perturbation perturbation_field(const json& j, const std::string& path) {
  if (!j.is_object() || !j.contains("kind") || !j["kind"].is_string())
    fail(path + ".kind", "expected a perturbation kind string");
  std::string kind = j["kind"].get<std::string>();
  if (kind == "geometric") {
    GeometricPerturbation g;
    if (!j.contains("amplitude") || !j["amplitude"].is_number())
      fail(path + ".amplitude", "expected a number");
    if (!j.contains("decay") || !j["decay"].is_number())
      fail(path + ".decay", "expected a number");
    g.amplitude = j["amplitude"].get<double>();
    g.decay = j["decay"].get<double>();
    return Perturbation(g);
  }
  if (kind == "finite") {
    FinitePerturbation f;
    if (!j.contains("values") || !j["values"].is_array())
      fail(path + ".values", "expected an array of numbers");
    for (std::size_t i = 0; i < j["values"].size(); ++i) {
      if (!j["values"][i].is_number())
        fail(path + ".values[" + std::to_string(i) + "]", "expected a number");
      f.values.push_back(j["values"][i].get<double>());
    }
    return Perturbation(f);
  }
  fail(path + ".kind", "unknown perturbation kind '" + kind + "'");
}

json level_json(const Level& l) {
  json j;
  j["n"] = l.n;
  if (l.uniform() && !l.ratios.empty()) {
    j["c"] = l.ratios.front().str();
  } else {
    json arr = json::array();
    for (const auto& r : l.ratios) arr.push_back(r.str());
    j["ratios"] = arr;
  }
  return j;
}

json schedule_json(const RatioSchedule& s) {
  json j;
  if (const auto* u = s.get_if<UniformSchedule>()) {
    j["kind"] = "uniform";
    j["n"] = u->n;
    j["c"] = u->c.str();
  } else if (const auto* ep = s.get_if<EventuallyPeriodicSchedule>()) {
    j["kind"] = "eventually_periodic";
    j["prefix"] = json::array();
    for (const auto& l : ep->prefix) j["prefix"].push_back(level_json(l));
    j["cycle"] = json::array();
    for (const auto& l : ep->cycle) j["cycle"].push_back(level_json(l));
  } else if (const auto* bp = s.get_if<BlockProgramSchedule>()) {
    j["kind"] = "block_program";
    j["stages"] = json::array();
    for (const auto& st : bp->stages) {
      json sj = level_json(st.level);
      sj["length"] = st.length;
      j["stages"].push_back(sj);
    }
  } else {
    const auto* m = s.get_if<MarkerFamilySchedule>();
    j["kind"] = "example1";
    if (m->explicit_markers.empty())
      j["markers"] = "factorial";
    else
      j["markers"] = m->explicit_markers;
  }
  return j;
}

int line_of_byte(const std::string& text, std::size_t byte) {
  int line = 1;
  for (std::size_t i = 0; i < byte && i < text.size(); ++i)
    if (text[i] == '\n') ++line;
  return line;
}

}  // namespace

LoadedSpec parse_spec_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    int line = line_of_byte(text, e.byte);
    throw SpecParseError("spec file syntax error at line " + std::to_string(line) + ": " +
                             e.what(),
                         "", line);
  }
  if (!j.is_object() || !j.contains("kind") || !j["kind"].is_string())
    fail("kind", "expected \"moran\" or \"cantor_like\"");
  std::string kind = j["kind"].get<std::string>();
  if (!j.contains("schedule")) fail("schedule", "missing");

  LoadedSpec out;
  if (kind == "moran") {
    MoranSpec m;
    m.d = 1;
    if (j.contains("d")) {
      if (!j["d"].is_number_integer()) fail("d", "expected an integer");
      m.d = j["d"].get<int>();
    }
    m.schedule = schedule_field(j["schedule"], "schedule");
    out.canonical = to_canonical_json(m);
    out.spec = std::move(m);
  } else if (kind == "cantor_like") {
    CantorLikeSpec c;
    c.schedule = schedule_field(j["schedule"], "schedule");
    if (j.contains("perturbation"))
      c.perturbation = perturbation_field(j["perturbation"], "perturbation");
    out.canonical = to_canonical_json(c);
    out.spec = std::move(c);
  } else {
    fail("kind", "unknown spec kind '" + kind + "'");
  }
  out.hash = fnv1a64(out.canonical);
  return out;
}

LoadedSpec load_spec_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw SpecParseError("cannot open spec file '" + path + "'", path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_spec_json(ss.str());
}

std::string to_canonical_json(const MoranSpec& spec) {
  json j;
  j["kind"] = "moran";
  j["d"] = spec.d;
  j["schedule"] = schedule_json(spec.schedule);
  return j.dump();
}

std::string to_canonical_json(const CantorLikeSpec& spec) {
  json j;
  j["kind"] = "cantor_like";
  j["schedule"] = schedule_json(spec.schedule);
  if (const auto* g = std::get_if<GeometricPerturbation>(&spec.perturbation.variant())) {
    j["perturbation"] = {{"kind", "geometric"},
                         {"amplitude", g->amplitude},
                         {"decay", g->decay}};
  } else {
    const auto& f = std::get<FinitePerturbation>(spec.perturbation.variant());
    j["perturbation"] = {{"kind", "finite"}, {"values", f.values}};
  }
  return j.dump();
}

}  // namespace morandim
