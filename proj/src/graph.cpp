#include "mst/graph.h"

namespace mst {

std::vector<std::vector<int>> dfs_paths(std::size_t node_count, const std::vector<GraphEdge>& edges, int root) {
    std::vector<std::vector<const GraphEdge*>> out_edges(node_count);
    for (const auto& e : edges)
        if (e.from >= 0 && static_cast<std::size_t>(e.from) < node_count && e.to >= 0 &&
            static_cast<std::size_t>(e.to) < node_count)
            out_edges[static_cast<std::size_t>(e.from)].push_back(&e);

    std::vector<std::vector<int>> paths;
    if (root < 0 || static_cast<std::size_t>(root) >= node_count) return paths;

    std::vector<bool> seen(node_count, false);
    std::vector<int> path;
    // Iterative to keep deep graphs off the call stack.
    struct Frame {
        int node;
        std::size_t next = 0;
        bool has_child = false;
    };
    std::vector<Frame> stack;
    seen[static_cast<std::size_t>(root)] = true;
    stack.push_back({root});
    while (!stack.empty()) {
        Frame& f = stack.back();
        const auto& outs = out_edges[static_cast<std::size_t>(f.node)];
        if (f.next < outs.size()) {
            const GraphEdge* e = outs[f.next++];
            if (seen[static_cast<std::size_t>(e->to)]) continue;
            seen[static_cast<std::size_t>(e->to)] = true;
            f.has_child = true;
            path.push_back(e->id);
            stack.push_back({e->to});
            continue;
        }
        if (!f.has_child && !path.empty()) paths.push_back(path);
        stack.pop_back();
        if (!path.empty() && !stack.empty()) path.pop_back();
    }
    return paths;
}

}  // namespace mst
