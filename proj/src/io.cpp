#include "cdl/io.hpp"

#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>

#include <json.hpp>

namespace cdl {

using nlohmann::json;

std::string read_file(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) throw InputError("cannot read " + p.string());
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

ContractFile load_contract(const std::filesystem::path& p) { return parse_contract_file(read_file(p)); }

namespace {

json parse_json(const std::string& text, const char* what) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw InputError(std::string(what) + ": " + e.what());
  }
}

const json& field(const json& j, const char* name, const char* what) {
  if (!j.is_object() || !j.contains(name)) throw InputError(std::string(what) + ": missing field \"" + name + "\"");
  return j.at(name);
}

void check_alphabet(const json& j, const Alphabet& sigma, const char* what) {
  if (!j.is_array()) throw InputError(std::string(what) + ": alphabet must be a list of names");
  std::vector<std::string> names;
  for (const auto& n : j) {
    if (!n.is_string()) throw InputError(std::string(what) + ": alphabet must be a list of names");
    names.push_back(n.get<std::string>());
  }
  if (names != sigma.names()) throw InputError(std::string(what) + ": alphabet does not match the contract's");
}

Event event_of(const json& j, const Alphabet& sigma, const char* what) {
  if (!j.is_array()) throw InputError(std::string(what) + ": an event must be a list of action names");
  Event e;
  for (const auto& n : j) {
    if (!n.is_string()) throw InputError(std::string(what) + ": an event must be a list of action names");
    auto a = sigma.find(n.get<std::string>());
    if (!a) throw InputError(std::string(what) + ": unknown action " + n.get<std::string>());
    e.insert(*a);
  }
  return e;
}

Trace trace_of(const json& j, const Alphabet& sigma, const char* what) {
  if (!j.is_array()) throw InputError(std::string(what) + ": a trace must be a list of events");
  Trace t;
  for (const auto& e : j) t.push_back(event_of(e, sigma, what));
  return t;
}

}  // namespace

Interaction parse_trace(const std::string& text, const Alphabet& sigma) {
  constexpr const char* what = "trace file";
  const json j = parse_json(text, what);
  check_alphabet(field(j, "alphabet", what), sigma, what);
  Trace t0 = trace_of(field(j, "party0", what), sigma, what);
  Trace t1 = trace_of(field(j, "party1", what), sigma, what);
  if (t0.size() != t1.size()) throw InputError("trace file: party0 and party1 differ in length");
  return Interaction(std::move(t0), std::move(t1));
}

Interaction load_trace(const std::filesystem::path& p, const Alphabet& sigma) {
  return parse_trace(read_file(p), sigma);
}

MooreMachine parse_machine(const std::string& text, const Alphabet& sigma) {
  constexpr const char* what = "machine file";
  const json j = parse_json(text, what);
  if (j.contains("alphabet")) check_alphabet(j.at("alphabet"), sigma, what);
  MooreMachine m;
  const auto& party = field(j, "party", what);
  if (!party.is_number_integer() || (party.get<int>() != 0 && party.get<int>() != 1))
    throw InputError("machine file: party must be 0 or 1");
  m.party = party_from_index(party.get<int>());

  std::map<std::string, MooreMachine::State> ids;
  const auto& states = field(j, "states", what);
  if (!states.is_array()) throw InputError("machine file: states must be a list");
  for (const auto& s : states) {
    const auto& name = field(s, "name", what);
    if (!name.is_string()) throw InputError("machine file: state names must be strings");
    const auto n = name.get<std::string>();
    if (ids.count(n)) throw InputError("machine file: duplicate state " + n);
    Event out = s.contains("output") ? event_of(s.at("output"), sigma, what) : Event{};
    ids[n] = m.add_state(n, out);
  }
  auto state = [&](const json& v) {
    if (!v.is_string() || !ids.count(v.get<std::string>()))
      throw InputError("machine file: unknown state " + v.dump());
    return ids.at(v.get<std::string>());
  };
  m.initial = state(field(j, "initial", what));
  const auto& ts = field(j, "transitions", what);
  if (!ts.is_array()) throw InputError("machine file: transitions must be a list");
  for (const auto& t : ts) {
    const auto& g = field(t, "guard", what);
    if (!g.is_string()) throw InputError("machine file: guards must be strings");
    Guard guard;
    try {
      guard = parse_guard(g.get<std::string>(), sigma);
    } catch (const ParseError& e) {
      throw InputError(std::string("machine file: guard ") + g.dump() + ": " + e.what());
    }
    m.add_transition(state(field(t, "source", what)), guard, state(field(t, "target", what)));
  }
  if (j.contains("deterministic")) {
    if (!j.at("deterministic").is_boolean()) throw InputError("machine file: deterministic must be true or false");
    m.deterministic = j.at("deterministic").get<bool>();
  }
  try {
    validate(m, sigma);
  } catch (const InvalidMachine& e) {
    throw InputError(std::string("machine file: ") + e.what());
  }
  return m;
}

MooreMachine load_machine(const std::filesystem::path& p, const Alphabet& sigma) {
  return parse_machine(read_file(p), sigma);
}

std::string fnv1a64(const std::string& bytes) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace cdl
