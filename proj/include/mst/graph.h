#pragma once

#include <cstddef>
#include <vector>

namespace mst {

struct GraphEdge {
    int id;
    int from;
    int to;
};

/// Root-to-leaf paths (as edge-id lists) of the depth-first spanning tree
/// rooted at `root`. Out-edges are visited in the order given; an edge to
/// an already discovered node is cut. A root without tree edges yields no
/// path.
std::vector<std::vector<int>> dfs_paths(std::size_t node_count, const std::vector<GraphEdge>& edges, int root);

}  // namespace mst
