#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "normsim/lts.hpp"
#include "normsim/simulation.hpp"

namespace normsim {

// Explicit automaton text format: one declaration per line, whitespace
// separated; `#` starts a comment.
//   state <id>
//   start <id>
//   action <label>
//   step <src> <label> <dst>
Automaton parse_automaton(const std::string& text);
std::string format_automaton(const Automaton& a);
Automaton load_automaton(const std::string& path);
void save_automaton(const Automaton& a, const std::string& path);

Certificate certificate_from_json(const nlohmann::json& j);
nlohmann::json certificate_to_json(const Certificate& cert);
Certificate load_certificate(const std::string& path);
void save_certificate(const Certificate& cert, const std::string& path);

// The state relation a certificate induces between the two automata it
// relates (history/prophecy maps run upper to lower and are inverted).
Relation relation_of_certificate(const Certificate& cert);

// Fragment files: one fragment per line, `frag <s0> [<label> <s1>]...`.
std::vector<ExecutionFragment> parse_fragments(const std::string& text);
std::string format_fragment(const ExecutionFragment& frag);
std::vector<ExecutionFragment> load_fragments(const std::string& path);

nlohmann::json report_to_json(const CheckReport& report);

std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& content);

// Structural validation against the bundled JSON schema subset (type,
// properties, required, items, enum, additionalProperties).
bool matches_schema(const nlohmann::json& value, const nlohmann::json& schema,
                    std::string* error = nullptr);

}  // namespace normsim
