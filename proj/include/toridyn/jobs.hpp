#pragma once

#include <json.hpp>

#include <cctype>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "toridyn/certificates.hpp"
#include "toridyn/dynamics.hpp"

namespace toridyn {

// A parsed job file. Integers travel as decimal strings so arbitrary
// precision survives serialization; unknown fields are rejected outright.
struct Job {
  std::optional<Fan> fan;
  std::optional<IntMat> lattice_map;
  std::optional<std::vector<IntVec>> cone;
  std::optional<std::string> strategy;
  std::optional<size_t> branch_cap;
  std::optional<int> flip_cap;
  std::optional<int> difficulty_base;
  std::map<std::pair<size_t, size_t>, int> annotations;  // (trace, step) -> value
  std::optional<unsigned long> d2_bound;
};

namespace detail {

using json = nlohmann::json;

inline void require_keys(const json& obj, std::initializer_list<const char*> allowed,
                         const std::string& where) {
  for (const auto& item : obj.items()) {
    bool ok = false;
    for (const char* k : allowed)
      if (item.key() == k) ok = true;
    if (!ok) throw input_error("job: unknown field \"" + item.key() + "\" in " + where);
  }
}

inline Int parse_int(const json& j, const std::string& where) {
  if (!j.is_string()) throw input_error("job: " + where + " must be a decimal string");
  const std::string& s = j.get_ref<const std::string&>();
  size_t k = (!s.empty() && s[0] == '-') ? 1 : 0;
  bool ok = s.size() > k;
  for (size_t i = k; i < s.size(); ++i)
    if (!std::isdigit(static_cast<unsigned char>(s[i]))) ok = false;
  if (!ok) throw input_error("job: " + where + " is not a decimal integer: \"" + s + "\"");
  return Int(s);
}

inline long parse_long(const json& j, const std::string& where, long lo, long hi) {
  Int v = parse_int(j, where);
  if (!v.fits_slong_p() || v.get_si() < lo || v.get_si() > hi)
    throw input_error("job: " + where + " out of range");
  return v.get_si();
}

inline IntVec parse_vec(const json& j, const std::string& where) {
  if (!j.is_array()) throw input_error("job: " + where + " must be an array");
  IntVec v;
  for (size_t i = 0; i < j.size(); ++i)
    v.push_back(parse_int(j[i], where + "[" + std::to_string(i) + "]"));
  return v;
}

inline IntMat parse_mat(const json& j, const std::string& where) {
  if (!j.is_array()) throw input_error("job: " + where + " must be an array of rows");
  std::vector<IntVec> rows;
  for (size_t i = 0; i < j.size(); ++i)
    rows.push_back(parse_vec(j[i], where + "[" + std::to_string(i) + "]"));
  size_t cols = rows.empty() ? 0 : rows[0].size();
  for (const auto& r : rows)
    if (r.size() != cols) throw input_error("job: " + where + " rows have unequal length");
  IntMat m(rows.size(), cols);
  for (size_t i = 0; i < rows.size(); ++i)
    for (size_t c = 0; c < cols; ++c) m.at(i, c) = rows[i][c];
  return m;
}

inline Fan parse_fan(const json& j) {
  if (!j.is_object()) throw input_error("job: fan must be an object");
  require_keys(j, {"rank", "rays", "cones"}, "fan");
  if (!j.contains("rank") || !j.contains("rays") || !j.contains("cones"))
    throw input_error("job: fan needs rank, rays, and cones");
  int rank = static_cast<int>(parse_long(j["rank"], "fan.rank", 0, 64));
  std::vector<IntVec> rays;
  for (size_t i = 0; i < j["rays"].size(); ++i)
    rays.push_back(parse_vec(j["rays"][i], "fan.rays[" + std::to_string(i) + "]"));
  std::vector<std::vector<int>> cones;
  if (!j["cones"].is_array()) throw input_error("job: fan.cones must be an array");
  for (size_t i = 0; i < j["cones"].size(); ++i) {
    const json& c = j["cones"][i];
    if (!c.is_array()) throw input_error("job: fan.cones entries must be arrays");
    std::vector<int> cone;
    for (size_t k = 0; k < c.size(); ++k) {
      long idx = parse_long(c[k], "fan.cones[" + std::to_string(i) + "]", 0,
                            static_cast<long>(rays.size()));
      if (idx >= static_cast<long>(rays.size()))
        throw input_error("job: fan cone index " + std::to_string(idx) + " out of range");
      cone.push_back(static_cast<int>(idx));
    }
    cones.push_back(std::move(cone));
  }
  return make_fan(rank, std::move(rays), std::move(cones));
}

}  // namespace detail

inline Job parse_job(const std::string& text) {
  using detail::json;
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw input_error(std::string("job: invalid JSON: ") + e.what());
  }
  if (!j.is_object()) throw input_error("job: top level must be an object");
  detail::require_keys(j,
                       {"schema_version", "fan", "lattice_map", "cone", "strategy", "branch_cap",
                        "flip_cap", "difficulty_base", "difficulty_annotations", "d2_bound"},
                       "top level");
  if (!j.contains("schema_version") || j["schema_version"] != json("1"))
    throw input_error("job: schema_version \"1\" is required");

  Job job;
  if (j.contains("fan")) job.fan = detail::parse_fan(j["fan"]);
  if (j.contains("lattice_map")) job.lattice_map = detail::parse_mat(j["lattice_map"], "lattice_map");
  if (j.contains("cone")) {
    std::vector<IntVec> rays;
    if (!j["cone"].is_array()) throw input_error("job: cone must be an array of rays");
    for (size_t i = 0; i < j["cone"].size(); ++i)
      rays.push_back(detail::parse_vec(j["cone"][i], "cone[" + std::to_string(i) + "]"));
    job.cone = std::move(rays);
  }
  if (j.contains("strategy")) {
    if (!j["strategy"].is_string() ||
        (j["strategy"] != json("exhaustive") && j["strategy"] != json("first_ray")))
      throw input_error("job: strategy must be \"exhaustive\" or \"first_ray\"");
    job.strategy = j["strategy"].get<std::string>();
  }
  if (j.contains("branch_cap"))
    job.branch_cap = static_cast<size_t>(detail::parse_long(j["branch_cap"], "branch_cap", 1,
                                                            1000000));
  if (j.contains("flip_cap"))
    job.flip_cap = static_cast<int>(detail::parse_long(j["flip_cap"], "flip_cap", 0, 1000000));
  if (j.contains("difficulty_base"))
    job.difficulty_base =
        static_cast<int>(detail::parse_long(j["difficulty_base"], "difficulty_base", 0, 1000000));
  if (j.contains("difficulty_annotations")) {
    const json& anns = j["difficulty_annotations"];
    if (!anns.is_array()) throw input_error("job: difficulty_annotations must be an array");
    for (size_t i = 0; i < anns.size(); ++i) {
      const json& a = anns[i];
      std::string where = "difficulty_annotations[" + std::to_string(i) + "]";
      if (!a.is_object()) throw input_error("job: " + where + " must be an object");
      detail::require_keys(a, {"trace", "step", "value"}, where);
      if (!a.contains("trace") || !a.contains("step") || !a.contains("value"))
        throw input_error("job: " + where + " needs trace, step, and value");
      size_t trace = static_cast<size_t>(detail::parse_long(a["trace"], where + ".trace", 0,
                                                            1000000));
      size_t step = static_cast<size_t>(detail::parse_long(a["step"], where + ".step", 0, 1000000));
      int value = static_cast<int>(detail::parse_long(a["value"], where + ".value", 0, 1000000));
      job.annotations[{trace, step}] = value;
    }
  }
  if (j.contains("d2_bound"))
    job.d2_bound =
        static_cast<unsigned long>(detail::parse_long(j["d2_bound"], "d2_bound", 1, 1000000));
  return job;
}

namespace detail {

inline json j_int(const Int& x) { return x.get_str(); }
inline json j_count(size_t x) { return std::to_string(x); }
inline json j_small(long x) { return std::to_string(x); }

inline json j_rat(const Rat& q) {
  Rat c = q;
  c.canonicalize();
  return c.get_str();
}

inline json j_vec(const IntVec& v) {
  json a = json::array();
  for (const Int& x : v) a.push_back(j_int(x));
  return a;
}

inline json j_rvec(const RatVec& v) {
  json a = json::array();
  for (const Rat& x : v) a.push_back(j_rat(x));
  return a;
}

inline json j_mat(const IntMat& m) {
  json a = json::array();
  for (size_t i = 0; i < m.rows; ++i) a.push_back(j_vec(m.row(i)));
  return a;
}

inline json j_poly(const IntPoly& p) {
  json a = json::array();
  for (const Int& c : p.c) a.push_back(j_int(c));
  return a;
}

// ascending-coefficient pretty form, for the text format
inline std::string poly_text(const IntPoly& p) {
  std::string out;
  for (int k = p.degree(); k >= 0; --k) {
    const Int& c = p.coeff(k);
    if (c == 0) continue;
    Int a = abs(c);
    if (out.empty())
      out += (c < 0 ? "-" : "");
    else
      out += (c < 0 ? " - " : " + ");
    if (a != 1 || k == 0) out += a.get_str();
    if (k > 0) out += "x";
    if (k > 1) out += "^" + std::to_string(k);
  }
  return out.empty() ? "0" : out;
}

inline json j_alg(const AlgebraicNumber& a) {
  return json{{"decimal", a.decimal(10)}, {"minimal_polynomial", j_poly(a.minimal_polynomial())}};
}

inline json j_fan(const Fan& f) {
  json rays = json::array();
  for (const auto& r : f.rays) rays.push_back(j_vec(r));
  json cones = json::array();
  for (const auto& c : f.cones) {
    json cc = json::array();
    for (int idx : c) cc.push_back(j_small(idx));
    cones.push_back(cc);
  }
  return json{{"cones", cones}, {"rank", j_small(f.rank)}, {"rays", rays}};
}

inline json j_trace(const MMPTrace& t) {
  json steps = json::array();
  for (const auto& s : t.steps) {
    steps.push_back(json{{"iterate_exponent", j_small(s.iterate_exponent)},
                         {"kind", to_string(s.kind)},
                         {"ray", j_vec(s.ray)},
                         {"result_rank", j_small(s.result.fan.rank)},
                         {"source_rank", j_small(s.source.fan.rank)}});
  }
  json degrees = json::array();
  for (const auto& [dim, lambda] : t.per_step_degrees)
    degrees.push_back(json{{"dim", j_small(dim)}, {"lambda1", j_alg(lambda)}});
  return json{{"endpoint", json{{"note", t.endpoint_note}, {"rank", j_small(t.endpoint.fan.rank)}}},
              {"per_step_degrees", degrees},
              {"standard", t.standard},
              {"steps", steps},
              {"tractable", t.tractable}};
}

inline json j_primordial(const PrimordialDegrees& p) {
  if (!p.finite) return json{{"finite", false}};
  return json{{"finite", true},
              {"over", j_alg(*p.over)},
              {"over_trace", j_count(*p.over_trace)},
              {"under", j_alg(*p.under)},
              {"under_trace", j_count(*p.under_trace)}};
}

inline MMPOptions job_options(const Job& job) {
  MMPOptions opt;
  if (job.strategy)
    opt.strategy = *job.strategy == "first_ray" ? MMPStrategy::first_ray : MMPStrategy::exhaustive;
  if (job.branch_cap) opt.branch_cap = *job.branch_cap;
  if (job.flip_cap) opt.flip_cap = *job.flip_cap;
  return opt;
}

inline json j_options(const MMPOptions& opt) {
  return json{{"branch_cap", j_count(opt.branch_cap)},
              {"flip_cap", j_small(opt.flip_cap)},
              {"strategy", opt.strategy == MMPStrategy::first_ray ? "first_ray" : "exhaustive"}};
}

struct FanJob {
  ToricVariety X;
  ToricMorphism f;
};

inline FanJob fan_job(const Job& job, const char* cmd) {
  if (!job.fan || !job.lattice_map)
    throw input_error(std::string(cmd) + ": job needs a fan and a lattice_map");
  FanJob fj;
  fj.X = build_variety(*job.fan);
  fj.f = validate_morphism(*job.lattice_map, *job.fan, *job.fan);
  return fj;
}

}  // namespace detail

struct RunResult {
  std::string text;
  int exit_code = 0;
};

inline RunResult run_command(const std::string& command, const Job& job,
                             const std::string& format = "json") {
  using detail::json;
  json report{{"command", command}, {"schema_version", "1"}};
  json diagnostics = json::array();
  int exit_code = 0;
  std::string text;  // non-empty when format == "text"

  if (command == "analyze") {
    auto fj = detail::fan_job(job, "analyze");
    PullbackAction act = pullback(fj.f);
    DynamicalReport rep = analyze_endomorphism(act, fj.X);
    json results{{"class_rank", detail::j_small(fj.X.class_rank)},
                 {"det_pullback", detail::j_rat(rep.det_pullback)},
                 {"int_amplified", rep.int_amplified},
                 {"lambda1", detail::j_alg(rep.lambda1)}};
    if (rep.polarized)
      results["polarized"] = json{{"present", true},
                                  {"q", detail::j_rat(rep.polarized->q)},
                                  {"witness", detail::j_rvec(rep.polarized->witness)}};
    else
      results["polarized"] = json{{"present", false}};
    if (rep.amplified.amplified)
      results["amplified"] =
          json{{"amplified", true}, {"witness", detail::j_rvec(rep.amplified.witness)}};
    else
      results["amplified"] =
          json{{"amplified", false}, {"obstruction", detail::j_vec(rep.amplified.obstruction)}};
    report["fan"] = detail::j_fan(*job.fan);
    report["results"] = results;
    if (format == "text") {
      text += "command: analyze\n";
      text += "lambda1: " + rep.lambda1_approx + "  (minimal polynomial " +
              detail::poly_text(rep.lambda1.minimal_polynomial()) + ")\n";
      text += std::string("int_amplified: ") + (rep.int_amplified ? "yes" : "no") + "\n";
      if (rep.polarized)
        text += "polarized: q = " + detail::j_rat(rep.polarized->q).get<std::string>() + "\n";
      else
        text += "polarized: no\n";
      text += std::string("amplified: ") + (rep.amplified.amplified ? "yes" : "no") + "\n";
    }
  } else if (command == "mmp" || command == "preper" || command == "difficulty") {
    auto fj = detail::fan_job(job, command.c_str());
    MMPOptions opt = detail::job_options(job);
    if (command == "difficulty" && !job.difficulty_base)
      throw input_error("difficulty: job needs difficulty_base for the endpoint");
    MMPRun run = run_mmp(fj.X, fj.f, opt);
    if (command == "difficulty")
      for (const auto& [key, value] : job.annotations) {
        (void)value;
        if (key.first >= run.traces.size())
          throw input_error("difficulty: annotation trace index " + std::to_string(key.first) +
                            " out of range, the run produced " +
                            std::to_string(run.traces.size()) + " traces");
      }
    json traces = json::array();
    for (size_t ti = 0; ti < run.traces.size(); ++ti) {
      const MMPTrace& t = run.traces[ti];
      json jt = detail::j_trace(t);
      if (command == "preper") {
        DensityCertificate cert = density_certificate(t);
        json evidence = json::array();
        for (const auto& ev : cert.per_fibering_evidence) {
          json e{{"classification", to_string(ev.cls.kind)},
                 {"q", detail::j_rat(ev.cls.q)},
                 {"step", detail::j_count(ev.step)}};
          if (!ev.cls.note.empty()) e["note"] = ev.cls.note;
          evidence.push_back(e);
        }
        jt["certificate"] =
            json{{"evidence", evidence}, {"verdict", to_string(cert.verdict)}};
        jt["fibration_obstruction"] = fibration_obstruction(t);
      }
      if (command == "difficulty") {
        std::map<size_t, int> rel;
        for (const auto& [key, v] : job.annotations)
          if (key.first == ti) rel[key.second] = v;
        DifficultyBound b =
            propagate_difficulty(t, DifficultyBound{*job.difficulty_base, {}}, rel);
        json prov = json::array();
        for (const auto& p : b.provenance) prov.push_back(p);
        jt["difficulty"] = json{
            {"provenance", prov},
            {"value", b.value ? json(detail::j_small(*b.value)) : json("unknown")}};
      }
      traces.push_back(jt);
    }
    json results{{"branch_cap_hit", run.branch_cap_hit}, {"traces", traces}};
    if (command == "mmp") results["primordial"] = detail::j_primordial(primordial_degrees(run.traces));
    report["fan"] = detail::j_fan(*job.fan);
    report["options"] = detail::j_options(opt);
    report["results"] = results;
    if (run.branch_cap_hit) {
      diagnostics.push_back("branch cap reached, the trace list is partial");
      exit_code = 4;
    }
    if (format == "text") {
      text += "command: " + command + "\n";
      text += "traces: " + std::to_string(run.traces.size()) +
              (run.branch_cap_hit ? " (partial, branch cap reached)" : "") + "\n";
      for (size_t ti = 0; ti < run.traces.size(); ++ti) {
        const MMPTrace& t = run.traces[ti];
        text += "  trace " + std::to_string(ti) + ":";
        for (const auto& s : t.steps) text += " " + to_string(s.kind) + to_string(s.ray);
        text += t.steps.empty() ? " (already minimal)" : "";
        text += "\n";
      }
    }
  } else if (command == "entropy") {
    ConePreservingAuto a;
    std::string mode;
    if (job.fan && job.cone)
      throw input_error("entropy: give either a fan or an explicit cone, not both");
    if (job.fan) {
      auto fj = detail::fan_job(job, "entropy");
      PullbackAction act = pullback(fj.f);
      if (act.scale != 1)
        throw input_error("entropy: class action of the map is not integral");
      a = {act.scaled, fj.X.nef_rays};
      mode = "fan-symmetry";
      report["fan"] = detail::j_fan(*job.fan);
    } else {
      if (!job.lattice_map) throw input_error("entropy: job needs a lattice_map");
      a = {*job.lattice_map, job.cone};
      mode = job.cone ? "rational-cone" : "matrix-only";
      diagnostics.push_back(
          "linear-action analysis only; no underlying variety is certified");
    }
    EntropyReport r = positive_entropy(a);
    json results{{"infinite_order_in_action", r.infinite_order_in_action},
                 {"lambda1", detail::j_alg(r.lambda1)},
                 {"mode", mode},
                 {"positive_entropy", r.positive_entropy}};
    if (r.d1) {
      results["d1"] = detail::j_count(*r.d1);
      if (job.d2_bound) {
        Int d = lcm(Int(*r.d1), Int(*job.d2_bound));
        results["d"] = detail::j_int(d);
        results["d2_bound"] = detail::j_count(*job.d2_bound);
      }
    }
    if (r.lin_diagonal) {
      json lin = json::array();
      for (const Rat& s : *r.lin_diagonal) lin.push_back(detail::j_rat(s));
      results["lin_diagonal"] = lin;
    }
    report["results"] = results;
    if (format == "text") {
      text += "command: entropy\n";
      text += "lambda1: " + r.lambda1.decimal(10) + "  (minimal polynomial " +
              detail::poly_text(r.lambda1.minimal_polynomial()) + ")\n";
      text += std::string("positive_entropy: ") + (r.positive_entropy ? "yes" : "no") + "\n";
      text += std::string("infinite_order_in_action: ") +
              (r.infinite_order_in_action ? "yes" : "no") + "\n";
    }
  } else {
    throw input_error("unknown command: " + command);
  }

  report["diagnostics"] = diagnostics;
  RunResult out;
  out.exit_code = exit_code;
  out.text = format == "text" ? text : report.dump(2) + "\n";
  return out;
}

}  // namespace toridyn
