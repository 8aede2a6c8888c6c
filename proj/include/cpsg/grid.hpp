#pragma once

#include <algorithm>
#include <optional>
#include <queue>
#include <set>
#include <string>
#include <vector>

#include "cpsg/errors.hpp"

namespace cpsg {

struct Bus {
    std::string id;
    double load_mw = 0.0;
};

struct Line {
    std::string id;
    std::string from_bus;
    std::string to_bus;
    double reactance_pu = 0.0;
    std::optional<double> limit_mw;  // absent = unlimited
    double repair_hours = 0.0;       // T
    double repair_cost = 0.0;        // CR
};

struct Generator {
    std::string id;
    std::string bus;
    double cost_per_mwh = 0.0;
    double pmin_mw = 0.0;
    double pmax_mw = 0.0;
};

struct GridCase {
    std::vector<Bus> buses;
    std::vector<Line> lines;
    std::vector<Generator> generators;
    double base_mva = 100.0;
    std::string slack_bus;

    std::size_t bus_index(const std::string& id) const {
        for (std::size_t i = 0; i < buses.size(); ++i)
            if (buses[i].id == id) return i;
        throw StructuralError("unknown bus id: " + id);
    }

    std::size_t line_index(const std::string& id) const {
        for (std::size_t i = 0; i < lines.size(); ++i)
            if (lines[i].id == id) return i;
        throw StructuralError("unknown line id: " + id);
    }

    // Connectivity over buses with one line optionally removed.
    bool connected_without(std::optional<std::size_t> skip_line) const {
        if (buses.empty()) return false;
        std::vector<std::vector<std::size_t>> adj(buses.size());
        for (std::size_t l = 0; l < lines.size(); ++l) {
            if (skip_line && *skip_line == l) continue;
            const auto f = bus_index(lines[l].from_bus);
            const auto t = bus_index(lines[l].to_bus);
            adj[f].push_back(t);
            adj[t].push_back(f);
        }
        std::vector<bool> seen(buses.size(), false);
        std::queue<std::size_t> q;
        q.push(0);
        seen[0] = true;
        std::size_t count = 1;
        while (!q.empty()) {
            const auto u = q.front();
            q.pop();
            for (auto v : adj[u])
                if (!seen[v]) { seen[v] = true; ++count; q.push(v); }
        }
        return count == buses.size();
    }

    void validate() const {
        if (buses.empty()) throw StructuralError("grid case has no buses");
        std::set<std::string> ids;
        for (const auto& b : buses) {
            if (!ids.insert(b.id).second)
                throw StructuralError("duplicate bus id: " + b.id);
            if (b.load_mw < 0.0)
                throw StructuralError("negative load at bus " + b.id);
        }
        std::set<std::string> lids;
        for (const auto& l : lines) {
            if (!lids.insert(l.id).second)
                throw StructuralError("duplicate line id: " + l.id);
            if (l.from_bus == l.to_bus)
                throw StructuralError("line " + l.id + " connects a bus to itself");
            bus_index(l.from_bus);
            bus_index(l.to_bus);
            if (l.reactance_pu <= 0.0)
                throw StructuralError("line " + l.id + " needs positive reactance");
            if (l.limit_mw && *l.limit_mw <= 0.0)
                throw StructuralError("line " + l.id + " has a non-positive limit");
            if (l.repair_hours < 0.0 || l.repair_cost < 0.0)
                throw StructuralError("line " + l.id + " has negative repair data");
        }
        std::set<std::string> gids;
        double cap = 0.0, load = 0.0;
        for (const auto& g : generators) {
            if (!gids.insert(g.id).second)
                throw StructuralError("duplicate generator id: " + g.id);
            bus_index(g.bus);
            if (g.pmin_mw < 0.0 || g.pmin_mw > g.pmax_mw)
                throw StructuralError("generator " + g.id + " has invalid capacity range");
            if (g.cost_per_mwh < 0.0)
                throw StructuralError("generator " + g.id + " has negative marginal cost");
            cap += g.pmax_mw;
        }
        for (const auto& b : buses) load += b.load_mw;
        if (cap < load)
            throw StructuralError("total generation capacity below total load");
        if (base_mva <= 0.0) throw StructuralError("base MVA must be positive");
        bus_index(slack_bus);  // must exist
        if (!connected_without(std::nullopt))
            throw StructuralError("grid graph is not connected");
    }
};

struct DispatchResult {
    double total_cost = 0.0;             // value function V, currency per hour
    std::vector<double> gen_mw;          // by generator order
    std::vector<double> flow_mw;         // by line order, signed from->to
    std::vector<double> angle_rad;       // by bus order
    std::optional<std::string> outaged_line;
};

}  // namespace cpsg
