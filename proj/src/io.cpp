#include "normsim/io.hpp"

#include <fstream>
#include <sstream>

namespace normsim {

using nlohmann::json;

Automaton parse_automaton(const std::string& text) {
    std::set<State> states;
    std::set<State> start;
    std::set<ActionLabel> actions;
    std::set<Step> steps;

    std::istringstream in(text);
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        auto hash = line.find('#');
        if (hash != std::string::npos) {
            line.erase(hash);
        }
        std::istringstream tokens(line);
        std::string keyword;
        if (!(tokens >> keyword)) {
            continue;
        }
        auto fail = [&](const std::string& msg) {
            throw Error("automaton file line " + std::to_string(line_no) + ": " + msg);
        };
        auto next_token = [&](const char* what) {
            std::string tok;
            if (!(tokens >> tok)) {
                fail(std::string("missing ") + what);
            }
            return tok;
        };
        if (keyword == "state") {
            states.insert(next_token("state id"));
        } else if (keyword == "start") {
            start.insert(next_token("state id"));
        } else if (keyword == "action") {
            actions.insert(ActionLabel::parse(next_token("action label")));
        } else if (keyword == "step") {
            std::string src = next_token("step source");
            ActionLabel label = ActionLabel::parse(next_token("step label"));
            std::string dst = next_token("step target");
            steps.insert(Step{src, label, dst});
        } else {
            fail("unknown declaration: " + keyword);
        }
        std::string extra;
        if (tokens >> extra) {
            fail("trailing token: " + extra);
        }
    }
    return Automaton(std::move(states), std::move(start), std::move(actions), std::move(steps));
}

std::string format_automaton(const Automaton& a) {
    std::ostringstream out;
    for (const auto& s : a.states()) {
        out << "state " << s << "\n";
    }
    for (const auto& s : a.start()) {
        out << "start " << s << "\n";
    }
    for (const auto& label : a.actions()) {
        if (!label.is_tau()) {
            out << "action " << label.str() << "\n";
        }
    }
    for (const auto& step : a.steps()) {
        out << "step " << step.src << " " << step.label.str() << " " << step.dst << "\n";
    }
    return out.str();
}

Automaton load_automaton(const std::string& path) {
    try {
        return parse_automaton(read_file(path));
    } catch (const Error& e) {
        throw Error(path + ": " + e.what());
    }
}

void save_automaton(const Automaton& a, const std::string& path) {
    write_file(path, format_automaton(a));
}

namespace {

Relation relation_from_json(const json& j) {
    if (!j.is_array()) {
        throw CertificateError("certificate relation must be an array of pairs");
    }
    Relation rel;
    for (const auto& pair : j) {
        if (!pair.is_array() || pair.size() != 2 || !pair[0].is_string() || !pair[1].is_string()) {
            throw CertificateError("relation entries must be [lower, upper] state pairs");
        }
        rel.insert(pair[0].get<std::string>(), pair[1].get<std::string>());
    }
    return rel;
}

json relation_to_json(const Relation& rel) {
    json out = json::array();
    for (const auto& [s, u] : rel.pairs()) {
        out.push_back(json::array({s, u}));
    }
    return out;
}

PartialStateMap map_from_json(const json& j) {
    if (!j.is_object()) {
        throw CertificateError("certificate map must be an object");
    }
    std::map<State, State> entries;
    for (const auto& [key, value] : j.items()) {
        if (!value.is_string()) {
            throw CertificateError("map values must be state ids");
        }
        entries.emplace(key, value.get<std::string>());
    }
    return PartialStateMap(std::move(entries));
}

json map_to_json(const PartialStateMap& map) {
    json out = json::object();
    for (const auto& [s, u] : map.entries()) {
        out[s] = u;
    }
    return out;
}

NormTable norm_from_json(const json& j) {
    if (!j.is_array()) {
        throw CertificateError("certificate norm must be an array");
    }
    NormTable table;
    for (const auto& entry : j) {
        if (!entry.is_object() || !entry.contains("key") || !entry.contains("state") ||
            !entry.contains("value")) {
            throw CertificateError("norm entries need key, state and value");
        }
        const json& key = entry["key"];
        NormKey norm_key;
        if (key.contains("step")) {
            const json& step = key["step"];
            if (!step.is_array() || step.size() != 3) {
                throw CertificateError("step norm keys are [src, label, dst] triples");
            }
            norm_key = Step{step[0].get<std::string>(),
                            ActionLabel::parse(step[1].get<std::string>()),
                            step[2].get<std::string>()};
        } else if (key.contains("start")) {
            norm_key = key["start"].get<std::string>();
        } else {
            throw CertificateError("norm keys carry either a step or a start state");
        }
        table.set(norm_key, entry["state"].get<std::string>(),
                  entry["value"].get<std::uint64_t>());
    }
    return table;
}

json norm_to_json(const NormTable& table) {
    json out = json::array();
    for (const auto& [key, value] : table.entries()) {
        json entry;
        if (const Step* step = std::get_if<Step>(&key.first)) {
            entry["key"] = {{"step", json::array({step->src, step->label.str(), step->dst})}};
        } else {
            entry["key"] = {{"start", std::get<State>(key.first)}};
        }
        entry["state"] = key.second;
        entry["value"] = value;
        out.push_back(entry);
    }
    return out;
}

}  // namespace

Certificate certificate_from_json(const json& j) {
    if (!j.is_object() || !j.contains("kind") || !j["kind"].is_string()) {
        throw CertificateError("certificate needs a string 'kind'");
    }
    CertificateKind kind = certificate_kind_from_string(j["kind"].get<std::string>());
    auto norm_or_empty = [&]() {
        return j.contains("norm") ? norm_from_json(j["norm"]) : NormTable{};
    };
    switch (kind) {
        case CertificateKind::refinement: {
            if (!j.contains("map")) {
                throw CertificateError("refinement certificate needs a map");
            }
            PartialStateMap map = map_from_json(j["map"]);
            if (j.contains("domain_predicate") && !j["domain_predicate"].is_null()) {
                // Optional domain restriction: keep only listed states.
                std::set<State> domain;
                for (const auto& s : j["domain_predicate"]) {
                    domain.insert(s.get<std::string>());
                }
                std::map<State, State> restricted;
                for (const auto& [s, u] : map.entries()) {
                    if (domain.count(s)) {
                        restricted.emplace(s, u);
                    }
                }
                map = PartialStateMap(std::move(restricted));
            }
            return Certificate{RefinementCert{std::move(map)}};
        }
        case CertificateKind::forward: {
            if (!j.contains("relation")) {
                throw CertificateError("forward certificate needs a relation");
            }
            return Certificate{ForwardCert{relation_from_json(j["relation"]), norm_or_empty()}};
        }
        case CertificateKind::backward: {
            if (!j.contains("relation")) {
                throw CertificateError("backward certificate needs a relation");
            }
            std::optional<std::set<State>> q;
            if (j.contains("Q") && !j["Q"].is_null()) {
                q.emplace();
                for (const auto& s : j["Q"]) {
                    q->insert(s.get<std::string>());
                }
            }
            return Certificate{
                BackwardCert{relation_from_json(j["relation"]), norm_or_empty(), std::move(q)}};
        }
        case CertificateKind::history: {
            if (!j.contains("map")) {
                throw CertificateError("history certificate needs a map (upper to lower)");
            }
            return Certificate{HistoryCert{map_from_json(j["map"]), norm_or_empty()}};
        }
        case CertificateKind::prophecy: {
            if (!j.contains("map")) {
                throw CertificateError("prophecy certificate needs a map (upper to lower)");
            }
            bool image_finite = j.value("image_finite_required", false);
            return Certificate{
                ProphecyCert{map_from_json(j["map"]), norm_or_empty(), image_finite}};
        }
    }
    throw CertificateError("unreachable");
}

json certificate_to_json(const Certificate& cert) {
    json out;
    out["kind"] = to_string(kind_of(cert));
    if (const auto* c = std::get_if<RefinementCert>(&cert)) {
        out["map"] = map_to_json(c->map);
    } else if (const auto* c = std::get_if<ForwardCert>(&cert)) {
        out["relation"] = relation_to_json(c->rel);
        out["norm"] = norm_to_json(c->norm);
    } else if (const auto* c = std::get_if<BackwardCert>(&cert)) {
        out["relation"] = relation_to_json(c->rel);
        out["norm"] = norm_to_json(c->norm);
        if (c->q) {
            out["Q"] = json::array();
            for (const auto& s : *c->q) {
                out["Q"].push_back(s);
            }
        }
    } else if (const auto* c = std::get_if<HistoryCert>(&cert)) {
        out["map"] = map_to_json(c->map);
        out["norm"] = norm_to_json(c->norm);
    } else if (const auto* c = std::get_if<ProphecyCert>(&cert)) {
        out["map"] = map_to_json(c->map);
        out["norm"] = norm_to_json(c->norm);
        out["image_finite_required"] = c->image_finite_required;
    }
    return out;
}

Certificate load_certificate(const std::string& path) {
    json j;
    try {
        j = json::parse(read_file(path));
    } catch (const json::exception& e) {
        throw CertificateError(path + ": " + e.what());
    }
    return certificate_from_json(j);
}

void save_certificate(const Certificate& cert, const std::string& path) {
    write_file(path, certificate_to_json(cert).dump(2) + "\n");
}

Relation relation_of_certificate(const Certificate& cert) {
    if (const auto* c = std::get_if<RefinementCert>(&cert)) {
        return c->map.as_relation();
    }
    if (const auto* c = std::get_if<ForwardCert>(&cert)) {
        return c->rel;
    }
    if (const auto* c = std::get_if<BackwardCert>(&cert)) {
        return c->rel;
    }
    if (const auto* c = std::get_if<HistoryCert>(&cert)) {
        return c->map.inverse();
    }
    return std::get<ProphecyCert>(cert).map.inverse();
}

std::vector<ExecutionFragment> parse_fragments(const std::string& text) {
    std::vector<ExecutionFragment> out;
    std::istringstream in(text);
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        auto hash = line.find('#');
        if (hash != std::string::npos) {
            line.erase(hash);
        }
        std::istringstream tokens(line);
        std::string keyword;
        if (!(tokens >> keyword)) {
            continue;
        }
        if (keyword != "frag") {
            throw Error("fragment file line " + std::to_string(line_no) +
                        ": expected 'frag', got " + keyword);
        }
        ExecutionFragment frag;
        if (!(tokens >> frag.head)) {
            throw Error("fragment file line " + std::to_string(line_no) + ": missing head state");
        }
        std::string label;
        std::string state;
        while (tokens >> label) {
            if (!(tokens >> state)) {
                throw Error("fragment file line " + std::to_string(line_no) +
                            ": label without target state");
            }
            frag.tail.push_back({ActionLabel::parse(label), state});
        }
        out.push_back(std::move(frag));
    }
    return out;
}

std::string format_fragment(const ExecutionFragment& frag) { return "frag " + frag.str(); }

std::vector<ExecutionFragment> load_fragments(const std::string& path) {
    return parse_fragments(read_file(path));
}

json report_to_json(const CheckReport& report) {
    json out;
    out["accepted"] = report.accepted;
    out["truncated"] = report.truncated;
    out["violations"] = json::array();
    for (const auto& v : report.violations) {
        json jv;
        jv["condition"] = v.condition;
        if (v.step) {
            jv["step"] = json::array({v.step->src, v.step->label.str(), v.step->dst});
        }
        if (v.state) {
            jv["state"] = *v.state;
        }
        if (v.related) {
            jv["related"] = *v.related;
        }
        jv["detail"] = v.detail;
        out["violations"].push_back(jv);
    }
    if (report.max_image) {
        out["max_image"] = *report.max_image;
    }
    return out;
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw Error("cannot read file: " + path);
    }
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw Error("cannot write file: " + path);
    }
    out << content;
}

bool matches_schema(const json& value, const json& schema, std::string* error) {
    auto fail = [&](const std::string& msg) {
        if (error != nullptr) {
            *error = msg;
        }
        return false;
    };
    if (schema.contains("type")) {
        const std::string type = schema["type"].get<std::string>();
        bool ok = (type == "object" && value.is_object()) || (type == "array" && value.is_array()) ||
                  (type == "string" && value.is_string()) ||
                  (type == "integer" && value.is_number_integer()) ||
                  (type == "number" && value.is_number()) ||
                  (type == "boolean" && value.is_boolean()) || (type == "null" && value.is_null());
        if (!ok) {
            return fail("expected type " + type + ", got " + value.dump());
        }
    }
    if (schema.contains("enum")) {
        bool found = false;
        for (const auto& candidate : schema["enum"]) {
            if (candidate == value) {
                found = true;
                break;
            }
        }
        if (!found) {
            return fail("value " + value.dump() + " not in enum");
        }
    }
    if (value.is_object()) {
        if (schema.contains("required")) {
            for (const auto& key : schema["required"]) {
                if (!value.contains(key.get<std::string>())) {
                    return fail("missing required key " + key.get<std::string>());
                }
            }
        }
        if (schema.contains("properties")) {
            for (const auto& [key, sub] : schema["properties"].items()) {
                if (value.contains(key) && !matches_schema(value.at(key), sub, error)) {
                    return false;
                }
            }
            if (schema.value("additionalProperties", true) == false) {
                for (const auto& [key, sub] : value.items()) {
                    if (!schema["properties"].contains(key)) {
                        return fail("unexpected key " + key);
                    }
                }
            }
        }
    }
    if (value.is_array() && schema.contains("items")) {
        for (const auto& item : value) {
            if (!matches_schema(item, schema["items"], error)) {
                return false;
            }
        }
    }
    return true;
}

}  // namespace normsim
