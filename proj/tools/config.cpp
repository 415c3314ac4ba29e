#include "config.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

namespace cylev::app {
namespace {

using nlohmann::json;

// Reads the members of one JSON object and rejects any key not consumed.
class ObjectReader {
 public:
  ObjectReader(const json& j, std::string where) : j_(j), where_(std::move(where)) {
    if (!j_.is_object()) fail("expected an object");
  }

  bool has(const std::string& key) const { return j_.contains(key); }

  const json& at(const std::string& key) {
    if (!j_.contains(key)) fail("missing key '" + key + "'");
    used_.insert(key);
    return j_.at(key);
  }

  double number(const std::string& key) {
    const json& v = at(key);
    if (!v.is_number()) fail("'" + key + "' must be a number");
    const double x = v.get<double>();
    if (!std::isfinite(x)) fail("'" + key + "' must be finite");
    return x;
  }
  double number(const std::string& key, double fallback) { return has(key) ? number(key) : fallback; }

  std::uint64_t unsigned_integer(const std::string& key) {
    const json& v = at(key);
    if (!v.is_number_unsigned() && !(v.is_number_integer() && v.get<std::int64_t>() >= 0))
      fail("'" + key + "' must be a non-negative integer");
    return v.get<std::uint64_t>();
  }
  std::uint64_t unsigned_integer(const std::string& key, std::uint64_t fallback) {
    return has(key) ? unsigned_integer(key) : fallback;
  }

  bool boolean(const std::string& key, bool fallback) {
    if (!has(key)) return fallback;
    const json& v = at(key);
    if (!v.is_boolean()) fail("'" + key + "' must be a boolean");
    return v.get<bool>();
  }

  std::string string(const std::string& key) {
    const json& v = at(key);
    if (!v.is_string()) fail("'" + key + "' must be a string");
    return v.get<std::string>();
  }

  std::vector<double> numbers(const std::string& key) {
    const json& v = at(key);
    if (!v.is_array()) fail("'" + key + "' must be an array of numbers");
    std::vector<double> out;
    for (const auto& x : v) {
      if (!x.is_number()) fail("'" + key + "' must be an array of numbers");
      out.push_back(x.get<double>());
      if (!std::isfinite(out.back())) fail("'" + key + "' entries must be finite");
    }
    return out;
  }

  std::string path(const std::string& key) const { return where_ + "." + key; }

  void finish() const {
    for (auto it = j_.begin(); it != j_.end(); ++it)
      if (!used_.count(it.key())) fail("unknown key '" + it.key() + "'");
  }

  [[noreturn]] void fail(const std::string& message) const {
    throw ConfigError(where_ + ": " + message);
  }

 private:
  const json& j_;
  std::string where_;
  std::set<std::string> used_;
};

template <class F>
auto guarded(const std::string& where, F&& build) {
  try {
    return build();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(where + ": " + e.what());
  }
}

Atom parse_atom(const json& j, const std::string& where) {
  ObjectReader r(j, where);
  Atom a{r.number("intensity"), r.number("jump")};
  r.finish();
  return a;
}

LevyMeasure1D parse_measure_at(const json& j, const std::string& where) {
  ObjectReader r(j, where);
  const std::string type = r.string("type");
  LevyMeasure1D m;
  if (type == "none") {
    m = NoJumps{};
  } else if (type == "symmetric_stable") {
    m = SymmetricStableMeasure{r.number("alpha"), r.number("scale", 1.0)};
  } else if (type == "poisson_atom") {
    m = PoissonAtomMeasure{{r.number("intensity"), r.number("jump")}};
  } else if (type == "finite_atoms") {
    FiniteAtomsMeasure f;
    const json& atoms = r.at("atoms");
    if (!atoms.is_array()) r.fail("'atoms' must be an array");
    for (std::size_t i = 0; i < atoms.size(); ++i)
      f.atoms.push_back(parse_atom(atoms[i], r.path("atoms[" + std::to_string(i) + "]")));
    m = f;
  } else if (type == "stable_subordinator") {
    m = StableSubordinatorMeasure{r.number("index"), r.number("scale", 1.0)};
  } else {
    r.fail("unknown measure type '" + type + "'");
  }
  r.finish();
  guarded(where, [&] {
    validate(m);
    return 0;
  });
  return m;
}

DriverSpec parse_driver_at(const json& j, const std::string& where) {
  ObjectReader r(j, where);
  const std::string family = r.string("family");
  DriverSpec d;
  if (family == "brownian") {
    d = BrownianDriver{r.number("sigma", 1.0)};
  } else if (family == "poisson") {
    d = PoissonDriver{r.number("intensity"), r.number("jump", 1.0)};
  } else if (family == "compensated_poisson") {
    d = CompensatedPoissonDriver{r.number("intensity"), r.number("jump", 1.0)};
  } else if (family == "symmetric_stable") {
    d = SymmetricStableDriver{r.number("alpha"), r.number("scale", 1.0)};
  } else if (family == "stable_subordinator") {
    d = StableSubordinatorDriver{r.number("index"), r.number("scale", 1.0)};
  } else if (family == "drifted_subordinator") {
    DriftedSubordinatorDriver s;
    s.drift = r.number("drift", 0.0);
    if (r.has("jumps")) s.jumps = parse_measure_at(r.at("jumps"), r.path("jumps"));
    d = s;
  } else {
    r.fail("unknown driver family '" + family + "'");
  }
  r.finish();
  guarded(where, [&] {
    validate(d);
    return 0;
  });
  return d;
}

ModeSequence parse_sequence_at(const json& j, std::size_t truncation, const std::string& where) {
  ObjectReader r(j, where);
  const std::string type = r.string("type");
  std::optional<ModeSequence> s;
  guarded(where, [&] {
    if (type == "power") {
      const double a = r.number("amplitude", 1.0);
      s = ModeSequence::power(a, r.number("exponent"), truncation);
    } else if (type == "exponential") {
      const double a = r.number("amplitude", 1.0);
      s = ModeSequence::exponential(a, r.number("rate"), truncation);
    } else if (type == "constant") {
      s = ModeSequence::constant(r.number("value"), truncation);
    } else if (type == "explicit") {
      auto values = r.numbers("values");
      const bool finite = r.boolean("finite_support", false);
      s = ModeSequence(ExplicitSequence{std::move(values), finite}, truncation);
    } else {
      r.fail("unknown sequence type '" + type + "'");
    }
    return 0;
  });
  r.finish();
  return *s;
}

DiagonalIntegrand parse_integrand(const json& j, std::size_t truncation, double horizon,
                                  const std::string& where) {
  ObjectReader r(j, where);
  const std::string type = r.string("type");
  std::optional<DiagonalIntegrand> f;
  if (type == "semigroup_forward" || type == "semigroup_convolution") {
    ModeSequence gamma = parse_sequence_at(r.at("eigenvalues"), truncation, r.path("eigenvalues"));
    f = guarded(where, [&] {
      return type == "semigroup_forward" ? DiagonalIntegrand::semigroup_forward(gamma, horizon)
                                         : DiagonalIntegrand::semigroup_convolution(gamma, horizon);
    });
  } else if (type == "constant") {
    ModeSequence c = parse_sequence_at(r.at("values"), truncation, r.path("values"));
    f = guarded(where, [&] { return DiagonalIntegrand::constant(c, horizon); });
  } else if (type == "step") {
    auto breaks = r.numbers("breaks");
    const json& cells = r.at("cells");
    if (!cells.is_array()) r.fail("'cells' must be an array of arrays");
    std::vector<std::vector<double>> values;
    for (const auto& row : cells) {
      if (!row.is_array()) r.fail("'cells' must be an array of arrays");
      std::vector<double> v;
      for (const auto& x : row) {
        if (!x.is_number()) r.fail("'cells' entries must be numbers");
        v.push_back(x.get<double>());
      }
      values.push_back(std::move(v));
    }
    if (values.size() != truncation)
      r.fail("step kernel needs one row of cells per mode (" + std::to_string(truncation) + ")");
    f = guarded(where, [&] { return DiagonalIntegrand::step(breaks, values, horizon); });
  } else {
    r.fail("unknown integrand type '" + type + "'");
  }
  r.finish();
  return *f;
}

}  // namespace

DriverSpec parse_driver(const json& j) { return parse_driver_at(j, "driver"); }
LevyMeasure1D parse_measure(const json& j) { return parse_measure_at(j, "measure"); }
ModeSequence parse_sequence(const json& j, std::size_t truncation) {
  return parse_sequence_at(j, truncation, "sequence");
}

ExperimentConfig parse_config(const json& doc) {
  ObjectReader root(doc, "config");
  ExperimentConfig c;

  if (root.has("seed")) c.seed = root.unsigned_integer("seed");
  c.horizon = root.number("horizon", 1.0);
  if (!(c.horizon > 0.0)) root.fail("'horizon' must be positive");
  c.steps = root.unsigned_integer("steps", 1);
  c.samples = root.unsigned_integer("samples", 1);
  if (c.samples == 0) root.fail("'samples' must be >= 1");

  {
    ObjectReader p(root.at("process"), "config.process");
    const std::string kind = p.string("kind");
    c.truncation = p.unsigned_integer("truncation");
    if (c.truncation == 0) p.fail("'truncation' must be >= 1");
    if (kind == "series") {
      DriverSpec driver = parse_driver_at(p.at("driver"), p.path("driver"));
      ModeSequence scaling = parse_sequence_at(p.at("scaling"), c.truncation, p.path("scaling"));
      c.process = SeriesCylLevySpec{scaling, driver};
    } else if (kind == "subordinated") {
      DriverSpec sub = parse_driver_at(p.at("subordinator"), p.path("subordinator"));
      if (!is_subordinator(sub)) p.fail("'subordinator' must be a subordinator family");
      ModeSequence q = parse_sequence_at(p.at("covariance"), c.truncation, p.path("covariance"));
      SubordinatedWienerSpec spec{q, sub};
      guarded("config.process", [&] {
        validate(spec);
        return 0;
      });
      c.process = spec;
    } else {
      p.fail("'kind' must be 'series' or 'subordinated'");
    }
    p.finish();
  }

  if (root.has("integrand"))
    c.integrand = parse_integrand(root.at("integrand"), c.truncation, c.horizon, "config.integrand");

  if (root.has("theta")) {
    ObjectReader t(root.at("theta"), "config.theta");
    c.theta.functional.coefficients = t.numbers("functional");
    if (c.theta.functional.size() > c.truncation)
      t.fail("'functional' has more coefficients than the truncation level");
    if (t.has("multipliers")) c.theta.multipliers = t.numbers("multipliers");
    t.finish();
  } else {
    c.theta.functional = Functional::unit(1);
  }

  if (root.has("initial")) {
    c.initial = root.numbers("initial");
    if (c.initial.size() > c.truncation) root.fail("'initial' longer than the truncation level");
  }

  if (root.has("validation")) {
    ObjectReader v(root.at("validation"), "config.validation");
    c.ks_level = v.number("ks_level", 0.01);
    if (!(c.ks_level > 0.0 && c.ks_level < 1.0)) v.fail("'ks_level' must lie in (0, 1)");
    c.allowance = v.number("allowance", 0.0);
    if (c.allowance < 0.0) v.fail("'allowance' must be >= 0");
    v.finish();
  }

  c.record_every = root.unsigned_integer("record_every", 1);
  if (c.record_every == 0) root.fail("'record_every' must be >= 1");

  if (root.has("check")) {
    ObjectReader k(root.at("check"), "config.check");
    if (k.has("covariance"))
      c.check.covariance = parse_sequence_at(k.at("covariance"), c.truncation, k.path("covariance"));
    c.check.p = k.number("p", 2.0);
    if (c.check.p < 2.0) k.fail("'p' must be >= 2");
    k.finish();
  }

  if (root.has("ou")) {
    ObjectReader o(root.at("ou"), "config.ou");
    OUSection ou{parse_sequence_at(o.at("eigenvalues"), c.truncation, o.path("eigenvalues")),
                 o.unsigned_integer("record_every", 1)};
    if (ou.record_every == 0) o.fail("'record_every' must be >= 1");
    o.finish();
    c.ou = ou;
  }

  if (root.has("output")) {
    ObjectReader o(root.at("output"), "config.output");
    c.output_directory = o.string("directory");
    o.finish();
  }

  root.finish();
  return c;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError("config file '" + path + "' is not valid JSON: " + e.what());
  }
  return parse_config(doc);
}

}  // namespace cylev::app
