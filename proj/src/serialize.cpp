#include "repsieve/serialize.hpp"

#include <stdexcept>

namespace repsieve {

namespace {

void check_period(const json& j, std::size_t actual) {
  if (j.at("period").get<std::size_t>() != actual) {
    throw std::invalid_argument("cycle period field disagrees with its values");
  }
}

std::string kind_name(Window::Kind k) { return k == Window::Kind::fixed ? "fixed" : "all_from"; }

}  // namespace

void to_json(json& j, const ResidueCycle& c) {
  j = json{{"modulus", c.modulus}, {"period", c.period()}, {"values", c.values}};
}

void from_json(const json& j, ResidueCycle& c) {
  j.at("modulus").get_to(c.modulus);
  j.at("values").get_to(c.values);
  check_period(j, c.values.size());
}

void to_json(json& j, const EventualCycle& c) {
  j = json{{"modulus", c.modulus}, {"period", c.period()}, {"values", c.cycle}, {"tail", c.tail}};
}

void from_json(const json& j, EventualCycle& c) {
  j.at("modulus").get_to(c.modulus);
  j.at("values").get_to(c.cycle);
  c.tail = j.value("tail", std::vector<Residue>{});
  check_period(j, c.cycle.size());
}

void to_json(json& j, const WindowClosure& c) {
  j = json{{"modulus", c.modulus}, {"min_k", c.min_k}, {"period", c.period()}, {"classes", c.classes}};
}

void from_json(const json& j, WindowClosure& c) {
  j.at("modulus").get_to(c.modulus);
  j.at("min_k").get_to(c.min_k);
  j.at("classes").get_to(c.classes);
  check_period(j, c.classes.size());
}

void to_json(json& j, const RecurrenceSpec& s) {
  j = json{{"name", s.name}, {"p", s.coeff_p}, {"q", s.coeff_q}, {"seed0", s.seed0}, {"seed1", s.seed1}};
}

void from_json(const json& j, RecurrenceSpec& s) {
  j.at("name").get_to(s.name);
  j.at("p").get_to(s.coeff_p);
  j.at("q").get_to(s.coeff_q);
  j.at("seed0").get_to(s.seed0);
  j.at("seed1").get_to(s.seed1);
}

void to_json(json& j, const Window& w) { j = json{{"kind", kind_name(w.kind)}, {"k", w.k}}; }

void from_json(const json& j, Window& w) {
  const auto kind = j.at("kind").get<std::string>();
  if (kind == "fixed") {
    w.kind = Window::Kind::fixed;
  } else if (kind == "all_from") {
    w.kind = Window::Kind::all_from;
  } else {
    throw std::invalid_argument("unknown window kind '" + kind + "'");
  }
  j.at("k").get_to(w.k);
}

void to_json(json& j, const TargetForm& t) {
  j = json{{"spec", t.spec}, {"window", t.window}, {"digits", t.digits},
           {"base", t.base}, {"min_m", t.min_m},   {"min_n", t.min_n}};
}

void from_json(const json& j, TargetForm& t) {
  j.at("spec").get_to(t.spec);
  j.at("window").get_to(t.window);
  j.at("digits").get_to(t.digits);
  j.at("base").get_to(t.base);
  j.at("min_m").get_to(t.min_m);
  j.at("min_n").get_to(t.min_n);
}

void to_json(json& j, const RepdigitForm& f) { j = json{{"g", f.base}, {"a", f.digit}, {"m", f.length}}; }

void from_json(const json& j, RepdigitForm& f) {
  j.at("g").get_to(f.base);
  j.at("a").get_to(f.digit);
  j.at("m").get_to(f.length);
}

void to_json(json& j, const ConstraintState& s) {
  json pairs = json::array();
  for (const auto& p : s.feasible) pairs.push_back(json::array({p.n, p.m}));
  j = json{{"L", s.n_modulus}, {"M", s.m_modulus}, {"m_tail_checked", s.m_tail_checked},
           {"feasible", std::move(pairs)}};
}

void from_json(const json& j, ConstraintState& s) {
  j.at("L").get_to(s.n_modulus);
  j.at("M").get_to(s.m_modulus);
  j.at("m_tail_checked").get_to(s.m_tail_checked);
  s.feasible.clear();
  for (const auto& p : j.at("feasible")) {
    if (!p.is_array() || p.size() != 2) throw std::invalid_argument("feasible entries are [n, m] pairs");
    s.feasible.push_back({p.at(0).get<std::uint64_t>(), p.at(1).get<std::uint64_t>()});
  }
}

void to_json(json& j, const Step& s) {
  std::visit(
      [&](const auto& step) {
        using T = std::decay_t<decltype(step)>;
        if constexpr (std::is_same_v<T, ResidueIntersection>) {
          json lhs = std::visit([](const auto& x) { return json(x); }, step.lhs);
          lhs["type"] = std::holds_alternative<ResidueCycle>(step.lhs) ? "cycle" : "closure";
          j = json{{"kind", "residue_intersection"}, {"modulus", step.modulus},
                   {"digit", step.digit},             {"window", step.window},
                   {"lhs", std::move(lhs)},           {"repunit", step.repunit},
                   {"result", step.result}};
        } else if constexpr (std::is_same_v<T, DivisibilityCascade>) {
          j = json{{"kind", "divisibility_cascade"}, {"d", step.d}, {"p", step.p},
                   {"digit", step.digit}, {"result", step.result}};
          if (step.route == DivisibilityCascade::Route::order) {
            j["route"] = "order";
            j["order"] = step.order;
          } else {
            j["route"] = "repunit_cycle";
            j["repunit"] = step.repunit;
          }
        } else {
          j = json{{"kind", "window_extension"}, {"base_window", step.base_window},
                   {"modulus", step.modulus},    {"digit", step.digit},
                   {"product_cycle", step.product_cycle}, {"repunit", step.repunit},
                   {"result", step.result}};
        }
      },
      s);
}

void from_json(const json& j, Step& s) {
  const auto kind = j.at("kind").get<std::string>();
  if (kind == "residue_intersection") {
    ResidueIntersection step;
    j.at("modulus").get_to(step.modulus);
    j.at("digit").get_to(step.digit);
    j.at("window").get_to(step.window);
    const auto& lhs = j.at("lhs");
    const auto type = lhs.at("type").get<std::string>();
    if (type == "cycle") {
      step.lhs = lhs.get<ResidueCycle>();
    } else if (type == "closure") {
      step.lhs = lhs.get<WindowClosure>();
    } else {
      throw std::invalid_argument("unknown lhs type '" + type + "'");
    }
    j.at("repunit").get_to(step.repunit);
    j.at("result").get_to(step.result);
    s = std::move(step);
  } else if (kind == "divisibility_cascade") {
    DivisibilityCascade step;
    j.at("d").get_to(step.d);
    j.at("p").get_to(step.p);
    j.at("digit").get_to(step.digit);
    const auto route = j.at("route").get<std::string>();
    if (route == "order") {
      step.route = DivisibilityCascade::Route::order;
      j.at("order").get_to(step.order);
    } else if (route == "repunit_cycle") {
      step.route = DivisibilityCascade::Route::repunit_cycle;
      j.at("repunit").get_to(step.repunit);
    } else {
      throw std::invalid_argument("unknown cascade route '" + route + "'");
    }
    j.at("result").get_to(step.result);
    s = std::move(step);
  } else if (kind == "window_extension") {
    WindowExtension step;
    j.at("base_window").get_to(step.base_window);
    j.at("modulus").get_to(step.modulus);
    j.at("digit").get_to(step.digit);
    j.at("product_cycle").get_to(step.product_cycle);
    j.at("repunit").get_to(step.repunit);
    j.at("result").get_to(step.result);
    s = std::move(step);
  } else {
    throw std::invalid_argument("unknown step kind '" + kind + "'");
  }
}

void to_json(json& j, const Branch& b) {
  j = json{{"digit", b.digit}, {"window", b.window}, {"steps", b.steps},
           {"final", b.final_state}, {"conclusion", b.final_state.empty() ? "empty" : "residual"}};
}

void from_json(const json& j, Branch& b) {
  j.at("digit").get_to(b.digit);
  j.at("window").get_to(b.window);
  j.at("steps").get_to(b.steps);
  j.at("final").get_to(b.final_state);
}

void to_json(json& j, const Certificate& c) {
  json exceptions = json::array();
  for (const auto& e : c.exceptions) {
    exceptions.push_back(json{{"n", e.n}, {"m", e.m}, {"a", e.a}, {"k", e.k}});
  }
  json residual = json::array();
  for (const auto& b : c.branches) {
    if (!b.final_state.empty()) {
      residual.push_back(json{{"digit", b.digit}, {"window", b.window}, {"state", b.final_state}});
    }
  }
  j = json{{"schema", c.schema},
           {"target", c.target},
           {"strategy", to_string(c.strategy)},
           {"pool", c.pool},
           {"lattice_cap", c.lattice_cap},
           {"small_case_bound", {{"max_n", c.small_case_bound.max_n}, {"max_m", c.small_case_bound.max_m}}},
           {"cascades", c.cascades},
           {"branches", c.branches},
           {"exceptions", std::move(exceptions)},
           {"conclusion", c.conclusion == Conclusion::empty ? "empty" : "residual"},
           {"residual", std::move(residual)}};
}

void from_json(const json& j, Certificate& c) {
  j.at("schema").get_to(c.schema);
  j.at("target").get_to(c.target);
  c.strategy = strategy_from_string(j.at("strategy").get<std::string>());
  j.at("pool").get_to(c.pool);
  j.at("lattice_cap").get_to(c.lattice_cap);
  j.at("small_case_bound").at("max_n").get_to(c.small_case_bound.max_n);
  j.at("small_case_bound").at("max_m").get_to(c.small_case_bound.max_m);
  j.at("cascades").get_to(c.cascades);
  j.at("branches").get_to(c.branches);
  c.exceptions.clear();
  for (const auto& e : j.at("exceptions")) {
    c.exceptions.push_back({e.at("n").get<std::uint64_t>(), e.at("k").get<std::uint64_t>(),
                            e.at("m").get<std::uint64_t>(), e.at("a").get<std::uint32_t>()});
  }
  const auto conclusion = j.at("conclusion").get<std::string>();
  if (conclusion == "empty") {
    c.conclusion = Conclusion::empty;
  } else if (conclusion == "residual") {
    c.conclusion = Conclusion::residual;
  } else {
    throw std::invalid_argument("unknown conclusion '" + conclusion + "'");
  }
}

void to_json(json& j, const Hit& h) {
  j = json{{"n", h.n}, {"k", h.k}, {"m", h.m}, {"a", h.a}, {"value", h.value.get_str()}};
}

void to_json(json& j, const ScanResult& r) {
  j = json{{"target", r.target}, {"max_n", r.max_n}, {"max_digits", r.max_digits},
           {"hits", r.hits},     {"out_of_range", r.out_of_range}};
}

std::string dump_certificate(const Certificate& cert) { return json(cert).dump(2) + "\n"; }

Certificate parse_certificate(const std::string& text) { return json::parse(text).get<Certificate>(); }

}  // namespace repsieve
