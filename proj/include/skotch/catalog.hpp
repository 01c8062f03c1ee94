#ifndef SKOTCH_CATALOG_HPP
#define SKOTCH_CATALOG_HPP

#include "skotch/adversary.hpp"
#include "skotch/scheme.hpp"

#include <cstdint>
#include <functional>
#include <map>
#include <string>
#include <vector>

namespace skotch {

/**
 * Spec strings name library objects on the command line and in tests:
 * "name" or "name:key=value,key=value". Rationals accept "1/4" and "0.25".
 * All parsers throw std::invalid_argument with a usable message.
 */
struct SpecParams {
    std::string name;
    std::map<std::string, std::string> kv;
};
SpecParams parse_spec(const std::string& spec);

struct Rational64 {
    uint64_t num = 0, den = 1;
};
Rational64 parse_rational(const std::string& text);

// "pp-matching:eps=1/4", "color3", "path6", "seq3d:d=3", "cover:d=3,eps=1/4",
// "tree:d=3,eps=1/4", "d2ret:d=3,eps=1/8", "pwd:d=4,eps=1/8",
// "smmpc-forest:n=64,t=2", "toy2", "coin2", "and:inner=toy2,k=2",
// "majority:inner=coin2,k=3" (inner spec must itself be comma-free).
SchemePtr scheme_from_spec(const std::string& spec);

// "matching:m=2000", "path:n=6", "dary-tree:d=3,depth=4", "hypercube:d=4",
// "star_centers:n=8,d=6", "random:n=40,d=3,seed=1".
Graph graph_from_spec(const std::string& spec);

// "random-pair", "pug" (optional alpha), "pigeonhole", "pigeonhole-disabled",
// "blackbox:eps=1/2", "acd:eps=1/4,delta=1/4,mode=l1|multiset" (optional t,
// max_centers, two_sided).
AdversaryPtr adversary_from_spec(const std::string& spec);

/** A scheme together with a sampler of graphs from its domain (<= 60 vertices). */
struct CatalogEntry {
    SchemePtr scheme;
    std::string domain; // human-readable domain description
    std::function<Graph(uint64_t seed)> sample_graph;
};

// Representative instantiations of every scheme family; domain samplers are
// deterministic in the seed. One-sided and two-sided entries both appear
// (check scheme->one_sided()).
const std::vector<CatalogEntry>& catalog();

} // namespace skotch

#endif
