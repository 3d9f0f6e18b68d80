#pragma once

#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

#include "tjn/core.hpp"
#include "tjn/lts.hpp"
#include "tjn/semantics.hpp"

namespace tjn {

using json = nlohmann::ordered_json;

// --- net format ---
// { "types": [...], "variables": {name: type}, "places": [{id,type}],
//   "transitions": [{id}], "arcs": [{from,to,inscription:[[var,..],..]}] }

inline json net_to_json(const Net &net) {
    json j;
    j["types"] = net.types;
    j["variables"] = json::object();
    for (const auto &[v, t] : net.variables) j["variables"][v] = t;
    j["places"] = json::array();
    for (const auto &[id, pt] : net.places) j["places"].push_back({{"id", id}, {"type", pt}});
    j["transitions"] = json::array();
    for (const auto &t : net.transitions) j["transitions"].push_back({{"id", t}});
    j["arcs"] = json::array();
    for (const auto &[arc, ins] : net.arcs) {
        json vectors = json::array();
        for (const auto &[vec, n] : ins)
            for (int i = 0; i < n; ++i) vectors.push_back(vec);
        j["arcs"].push_back({{"from", arc.first}, {"to", arc.second}, {"inscription", vectors}});
    }
    return j;
}

inline std::string print_net(const Net &net) { return net_to_json(net).dump(2) + "\n"; }

inline Net net_from_json(const json &j) {
    Net net;
    for (const auto &t : j.at("types")) net.types.push_back(t.get<std::string>());
    if (j.contains("variables"))
        for (const auto &[v, t] : j.at("variables").items()) net.variables[v] = t.get<std::string>();
    for (const auto &p : j.at("places"))
        net.places[p.at("id").get<std::string>()] = p.at("type").get<PlaceType>();
    for (const auto &t : j.at("transitions")) net.transitions.insert(t.at("id").get<std::string>());
    if (j.contains("arcs"))
        for (const auto &a : j.at("arcs")) {
            Inscription ins;
            for (const auto &vec : a.at("inscription")) ins[vec.get<VarVector>()] += 1;
            net.arcs[{a.at("from").get<std::string>(), a.at("to").get<std::string>()}] = ins;
        }
    return net;
}

inline Net parse_net(const std::string &text) { return net_from_json(json::parse(text)); }

// --- marking format: { placeId: [[id,...],...] } ---

inline json marking_to_json(const Marking &m) {
    json j = json::object();
    for (const auto &[p, bag] : m.tokens) {
        json vecs = json::array();
        for (const auto &[vec, n] : bag)
            for (int i = 0; i < n; ++i) vecs.push_back(vec);
        j[p] = vecs;
    }
    return j;
}

inline std::string print_marking(const Marking &m) { return marking_to_json(m).dump(2) + "\n"; }

inline Marking marking_from_json(const json &j) {
    Marking m;
    for (const auto &[p, vecs] : j.items())
        for (const auto &vec : vecs) m.add(p, vec.get<IdVector>());
    return m;
}

inline Marking parse_marking(const std::string &text) {
    return marking_from_json(json::parse(text));
}

// --- firing sequence ---
// JSON: { "initial": marking, "records": [{"transition": t, "binding": {var: id}}] }
// CSV mirrors the firing table: header "transition,<type...>" in Gödel order,
// one identifier cell per type (requires the variable/type bijection).

inline json firing_to_json(const FiringSequence &seq) {
    json j;
    j["initial"] = marking_to_json(seq.initial);
    j["records"] = json::array();
    for (const auto &r : seq.records) {
        json b = json::object();
        for (const auto &[v, id] : r.binding) b[v] = id;
        j["records"].push_back({{"transition", r.transition}, {"binding", b}});
    }
    return j;
}

inline FiringSequence firing_from_json(const json &j) {
    FiringSequence seq;
    if (j.contains("initial")) seq.initial = marking_from_json(j.at("initial"));
    for (const auto &r : j.at("records")) {
        FiringRecord rec;
        rec.transition = r.at("transition").get<std::string>();
        for (const auto &[v, id] : r.at("binding").items()) rec.binding[v] = id.get<std::string>();
        seq.records.push_back(rec);
    }
    return seq;
}

inline std::string firing_to_csv(const Net &net, const FiringSequence &seq) {
    std::vector<std::string> types = net.types;
    std::sort(types.begin(), types.end());
    std::string out = "transition";
    for (const auto &t : types) out += "," + t;
    out += "\n";
    for (const auto &r : seq.records) {
        std::map<std::string, std::string> by_type;
        for (const auto &[v, id] : r.binding) {
            const std::string ty = var_type(net, v);
            if (!by_type.emplace(ty, id).second)
                throw error("firing CSV needs one variable per type; use the JSON format");
        }
        out += r.transition;
        for (const auto &t : types) out += "," + (by_type.count(t) ? by_type[t] : "");
        out += "\n";
    }
    return out;
}

inline FiringSequence firing_from_csv(const Net &net, const std::string &text) {
    FiringSequence seq;
    std::istringstream in(text);
    std::string line;
    if (!std::getline(in, line)) throw error("empty firing table");
    if (!line.empty() && line.back() == '\r') line.pop_back();
    std::vector<std::string> header;
    {
        std::istringstream ls(line);
        std::string cell;
        while (std::getline(ls, cell, ',')) header.push_back(cell);
    }
    if (header.empty() || header[0] != "transition")
        throw error("firing table header must start with 'transition'");
    std::vector<std::string> vars;  // variable per type column
    for (size_t i = 1; i < header.size(); ++i) vars.push_back(var_of_type(net, header[i]));
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        std::vector<std::string> cells;
        std::istringstream ls(line);
        std::string cell;
        while (std::getline(ls, cell, ',')) cells.push_back(cell);
        cells.resize(header.size());
        FiringRecord rec;
        rec.transition = cells[0];
        for (size_t i = 1; i < header.size(); ++i)
            if (!cells[i].empty()) rec.binding[vars[i - 1]] = cells[i];
        seq.records.push_back(rec);
    }
    return seq;
}

// --- event log: one JSON record per line ---

struct LogTrace {
    std::vector<std::string> case_ids;  // one id per type, Gödel order
    std::vector<std::string> events;
    auto operator<=>(const LogTrace &) const = default;
};

struct EventLog {
    std::vector<std::string> types;  // Gödel order
    std::set<LogTrace> traces;
    std::set<std::vector<std::string>> trace_set() const {
        std::set<std::vector<std::string>> r;
        for (const auto &t : traces) r.insert(t.events);
        return r;
    }
    bool operator==(const EventLog &o) const = default;
};

inline std::string print_log(const EventLog &log) {
    std::string out;
    for (const auto &t : log.traces) {
        json j;
        j["types"] = log.types;
        j["case"] = t.case_ids;
        j["trace"] = t.events;
        out += j.dump() + "\n";
    }
    return out;
}

inline EventLog parse_log(const std::string &text) {
    EventLog log;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        json j = json::parse(line);
        if (log.types.empty()) log.types = j.at("types").get<std::vector<std::string>>();
        LogTrace t;
        t.case_ids = j.at("case").get<std::vector<std::string>>();
        t.events = j.at("trace").get<std::vector<std::string>>();
        log.traces.insert(t);
    }
    return log;
}

// --- DOT export ---

inline std::string dot_escape(const std::string &s) {
    std::string r;
    for (char c : s) {
        if (c == '"' || c == '\\') r += '\\';
        r += c;
    }
    return r;
}

inline std::string net_to_dot(const Net &net) {
    std::string out = "digraph net {\n  rankdir=LR;\n";
    for (const auto &[id, pt] : net.places)
        out += "  \"" + dot_escape(id) + "\" [shape=circle,label=\"" + dot_escape(id) + "\\n<" +
               dot_escape(join(pt, ",")) + ">\"];\n";
    for (const auto &t : net.transitions)
        out += "  \"" + dot_escape(t) + "\" [shape=box,label=\"" + dot_escape(t) + "\"];\n";
    for (const auto &[arc, ins] : net.arcs) {
        std::vector<std::string> vecs;
        for (const auto &[vec, n] : ins)
            for (int i = 0; i < n; ++i) vecs.push_back(join(vec, ","));
        out += "  \"" + dot_escape(arc.first) + "\" -> \"" + dot_escape(arc.second) +
               "\" [label=\"" + dot_escape(join(vecs, " ")) + "\"];\n";
    }
    out += "}\n";
    return out;
}

inline std::string lts_to_dot(const Lts &lts) {
    std::string out = "digraph lts {\n  rankdir=LR;\n";
    for (int s = 0; s < lts.num_states; ++s) {
        std::string name = s < static_cast<int>(lts.state_names.size()) && !lts.state_names[s].empty()
                               ? lts.state_names[static_cast<size_t>(s)]
                               : std::to_string(s);
        out += "  s" + std::to_string(s) + " [shape=circle,label=\"" + dot_escape(name) + "\"" +
               (s == lts.initial ? ",style=bold" : "") + "];\n";
    }
    for (const auto &e : lts.edges)
        out += "  s" + std::to_string(e.src) + " -> s" + std::to_string(e.dst) + " [label=\"" +
               dot_escape(e.label()) + "\"];\n";
    out += "}\n";
    return out;
}

// --- files ---

inline std::string read_file(const std::string &path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw error("cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

inline void write_file(const std::string &path, const std::string &content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw error("cannot write " + path);
    out << content;
}

inline Net load_net(const std::string &path) { return parse_net(read_file(path)); }
inline Marking load_marking(const std::string &path) { return parse_marking(read_file(path)); }

inline FiringSequence load_firing(const Net &net, const std::string &path) {
    if (path.size() > 4 && path.substr(path.size() - 4) == ".csv")
        return firing_from_csv(net, read_file(path));
    return firing_from_json(json::parse(read_file(path)));
}

}  // namespace tjn
