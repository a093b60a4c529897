#pragma once

#include <algorithm>
#include <istream>
#include <map>
#include <ostream>
#include <set>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "kgalign/errors.hpp"
#include "kgalign/tsv.hpp"

namespace kgalign {

struct Triple {
    std::string head;
    std::string relation;
    std::string tail;

    auto operator<=>(const Triple&) const = default;
};

// A directed, labeled knowledge graph. Entity ids are opaque strings; the
// human-readable surface name is kept separately so it can be rewritten
// without touching graph identity. Immutable after load except for surface
// renames (see scorer.hpp).
class KnowledgeGraph {
public:
    KnowledgeGraph() = default;

    // Registers the entity if new; keeps an existing surface name.
    void add_entity(const std::string& id, const std::string& surface) {
        auto [it, inserted] = surface_by_id_.try_emplace(id, surface);
        (void)it;
        if (inserted) entity_ids_.push_back(id);
    }

    // Adds a triple, auto-registering its endpoints (surface = id).
    // Exact duplicates are dropped.
    void add_triple(const std::string& head, const std::string& relation,
                    const std::string& tail) {
        add_entity(head, head);
        add_entity(tail, tail);
        relations_.insert(relation);
        Triple t{head, relation, tail};
        if (!triple_set_.insert(t).second) return;
        triples_.push_back(t);
        adjacency_[head].push_back(triples_.size() - 1);
        if (tail != head) adjacency_[tail].push_back(triples_.size() - 1);
    }

    bool has_entity(const std::string& id) const {
        return surface_by_id_.count(id) > 0;
    }

    const std::string& surface(const std::string& id) const {
        auto it = surface_by_id_.find(id);
        if (it == surface_by_id_.end())
            throw LookupError("unknown entity id: " + id);
        return it->second;
    }

    void set_surface(const std::string& id, const std::string& surface) {
        auto it = surface_by_id_.find(id);
        if (it == surface_by_id_.end())
            throw LookupError("unknown entity id: " + id);
        it->second = surface;
    }

    // Indices into triples() touching the entity, either direction.
    const std::vector<std::size_t>& incident_triples(const std::string& id) const {
        static const std::vector<std::size_t> kEmpty;
        auto it = adjacency_.find(id);
        return it == adjacency_.end() ? kEmpty : it->second;
    }

    const std::vector<std::string>& entity_ids() const { return entity_ids_; }
    const std::set<std::string>& relations() const { return relations_; }
    const std::vector<Triple>& triples() const { return triples_; }

    std::size_t entity_count() const { return surface_by_id_.size(); }
    std::size_t relation_count() const { return relations_.size(); }
    std::size_t triple_count() const { return triples_.size(); }

    // Set equality over entities (with surfaces), relations and triples.
    bool same_content(const KnowledgeGraph& other) const {
        if (surface_by_id_.size() != other.surface_by_id_.size()) return false;
        for (const auto& [id, name] : surface_by_id_) {
            auto it = other.surface_by_id_.find(id);
            if (it == other.surface_by_id_.end() || it->second != name) return false;
        }
        return relations_ == other.relations_ && triple_set_ == other.triple_set_;
    }

private:
    std::unordered_map<std::string, std::string> surface_by_id_;
    std::vector<std::string> entity_ids_;  // insertion order
    std::set<std::string> relations_;
    std::vector<Triple> triples_;
    std::set<Triple> triple_set_;
    std::unordered_map<std::string, std::vector<std::size_t>> adjacency_;
};

// One-hop (by default) neighborhood of a topic entity. Holds ids only;
// surface names are resolved through the owning graph at scoring time.
struct TopicGraph {
    std::string topic_entity;
    std::vector<std::string> nodes;   // sorted, includes topic_entity
    std::vector<Triple> edges;        // induced: both endpoints in nodes

    bool contains(const std::string& id) const {
        return std::binary_search(nodes.begin(), nodes.end(), id);
    }
};

// Triples file: head TAB relation TAB tail, one per line, UTF-8, LF.
// Names file (optional): entity-id TAB surface-name. Surface defaults to the
// id itself. Name rows for ids that never occur in a triple are ignored.
inline KnowledgeGraph load_kg(std::istream& triples_in, std::istream* names_in = nullptr) {
    KnowledgeGraph kg;
    tsv::for_each_row(triples_in, [&](std::size_t line_no, const std::vector<std::string>& f) {
        if (f.size() != 3)
            throw ParseError(line_no, "expected 3 tab-separated fields, got " +
                                          std::to_string(f.size()));
        if (f[0].empty() || f[1].empty() || f[2].empty())
            throw ParseError(line_no, "empty field in triple");
        kg.add_triple(f[0], f[1], f[2]);
    });
    if (kg.triple_count() == 0)
        throw ParseError(0, "empty knowledge graph input (no triples)");
    if (names_in) {
        tsv::for_each_row(*names_in, [&](std::size_t line_no, const std::vector<std::string>& f) {
            if (f.size() != 2)
                throw ParseError(line_no, "expected 2 tab-separated fields in names file, got " +
                                              std::to_string(f.size()));
            if (kg.has_entity(f[0])) kg.set_surface(f[0], f[1]);
        });
    }
    return kg;
}

inline KnowledgeGraph load_kg_files(const std::string& triples_path,
                                    const std::string& names_path = "") {
    auto triples = tsv::open_input(triples_path);
    if (names_path.empty()) return load_kg(triples);
    auto names = tsv::open_input(names_path);
    return load_kg(triples, &names);
}

// Writes triples and names in sorted order so output is deterministic and
// a save/load round trip reproduces the same graph.
inline void save_kg(const KnowledgeGraph& kg, std::ostream& triples_out,
                    std::ostream* names_out = nullptr) {
    std::vector<Triple> sorted = kg.triples();
    std::sort(sorted.begin(), sorted.end());
    for (const auto& t : sorted)
        triples_out << t.head << '\t' << t.relation << '\t' << t.tail << '\n';
    if (names_out) {
        std::vector<std::string> ids = kg.entity_ids();
        std::sort(ids.begin(), ids.end());
        for (const auto& id : ids)
            *names_out << id << '\t' << kg.surface(id) << '\n';
    }
}

// Nodes reachable from `topic` within `radius` hops, edge direction ignored.
// Edges are the induced subgraph over those nodes.
inline TopicGraph build_topic_graph(const KnowledgeGraph& kg, const std::string& topic,
                                    int radius = 1) {
    if (!kg.has_entity(topic)) throw LookupError("unknown entity id: " + topic);

    std::set<std::string> nodes{topic};
    std::vector<std::string> frontier{topic};
    for (int hop = 0; hop < radius; ++hop) {
        std::vector<std::string> next;
        for (const auto& id : frontier) {
            for (std::size_t ti : kg.incident_triples(id)) {
                const Triple& t = kg.triples()[ti];
                const std::string& other = (t.head == id) ? t.tail : t.head;
                if (nodes.insert(other).second) next.push_back(other);
            }
        }
        frontier = std::move(next);
        if (frontier.empty()) break;
    }

    TopicGraph tg;
    tg.topic_entity = topic;
    tg.nodes.assign(nodes.begin(), nodes.end());
    std::set<Triple> edge_set;
    for (const auto& id : tg.nodes)
        for (std::size_t ti : kg.incident_triples(id)) {
            const Triple& t = kg.triples()[ti];
            if (nodes.count(t.head) && nodes.count(t.tail)) edge_set.insert(t);
        }
    tg.edges.assign(edge_set.begin(), edge_set.end());
    return tg;
}

}  // namespace kgalign
