#pragma once

#include <string>

#include "json.hpp"

#include "repsieve/modular.hpp"
#include "repsieve/oracle.hpp"
#include "repsieve/repdigit.hpp"
#include "repsieve/sieve.hpp"

namespace repsieve {

using nlohmann::json;

// Cycle shapes: {modulus, period, values} plus `tail` for eventual cycles.
void to_json(json& j, const ResidueCycle& c);
void from_json(const json& j, ResidueCycle& c);
void to_json(json& j, const EventualCycle& c);
void from_json(const json& j, EventualCycle& c);
void to_json(json& j, const WindowClosure& c);
void from_json(const json& j, WindowClosure& c);

void to_json(json& j, const RecurrenceSpec& s);
void from_json(const json& j, RecurrenceSpec& s);
void to_json(json& j, const Window& w);
void from_json(const json& j, Window& w);
void to_json(json& j, const TargetForm& t);
void from_json(const json& j, TargetForm& t);
void to_json(json& j, const RepdigitForm& f);  // {g, a, m}
void from_json(const json& j, RepdigitForm& f);

void to_json(json& j, const ConstraintState& s);
void from_json(const json& j, ConstraintState& s);
void to_json(json& j, const Step& s);
void from_json(const json& j, Step& s);
void to_json(json& j, const Branch& b);
void from_json(const json& j, Branch& b);
void to_json(json& j, const Certificate& c);
void from_json(const json& j, Certificate& c);

void to_json(json& j, const Hit& h);
void to_json(json& j, const ScanResult& r);

/// Pretty-printed with sorted keys; identical inputs give identical bytes.
std::string dump_certificate(const Certificate& cert);
/// Throws json::exception or std::invalid_argument on malformed input.
Certificate parse_certificate(const std::string& text);

}  // namespace repsieve
