#include "gmt/maxflow.hpp"

#include "gmt/geometry.hpp"

#include <boost/graph/adjacency_list.hpp>
#include <boost/graph/boykov_kolmogorov_max_flow.hpp>

namespace gmt {

namespace {

using Traits = boost::adjacency_list_traits<boost::vecS, boost::vecS, boost::directedS>;
using Graph = boost::adjacency_list<
    boost::vecS, boost::vecS, boost::directedS,
    boost::property<boost::vertex_index_t, long,
                    boost::property<boost::vertex_color_t, boost::default_color_type,
                                    boost::property<boost::vertex_distance_t, long,
                                                    boost::property<boost::vertex_predecessor_t, Traits::edge_descriptor>>>>,
    boost::property<boost::edge_capacity_t, std::int64_t,
                    boost::property<boost::edge_residual_capacity_t, std::int64_t,
                                    boost::property<boost::edge_reverse_t, Traits::edge_descriptor>>>>;

}  // namespace

struct MaxFlow::Impl {
  Graph g;
};

MaxFlow::MaxFlow(int nodes) : impl_(std::make_unique<Impl>()), nodes_(nodes) {
  impl_->g = Graph(static_cast<size_t>(nodes));
}

MaxFlow::~MaxFlow() = default;

void MaxFlow::add_edge(int u, int v, std::int64_t cap, std::int64_t rev_cap) {
  if (cap < 0 || rev_cap < 0) throw DomainError("negative capacity");
  Graph& g = impl_->g;
  auto cap_map = boost::get(boost::edge_capacity, g);
  auto rev_map = boost::get(boost::edge_reverse, g);
  const auto e = boost::add_edge(static_cast<size_t>(u), static_cast<size_t>(v), g).first;
  const auto r = boost::add_edge(static_cast<size_t>(v), static_cast<size_t>(u), g).first;
  cap_map[e] = cap;
  cap_map[r] = rev_cap;
  rev_map[e] = r;
  rev_map[r] = e;
}

std::int64_t MaxFlow::solve(int s, int t) {
  return boost::boykov_kolmogorov_max_flow(impl_->g, static_cast<size_t>(s), static_cast<size_t>(t));
}

std::vector<char> MaxFlow::source_side(int s) const {
  const Graph& g = impl_->g;
  auto res = boost::get(boost::edge_residual_capacity, g);
  std::vector<char> seen(static_cast<size_t>(nodes_), 0);
  std::vector<size_t> stack{static_cast<size_t>(s)};
  seen[static_cast<size_t>(s)] = 1;
  while (!stack.empty()) {
    const size_t u = stack.back();
    stack.pop_back();
    for (auto [it, end] = boost::out_edges(u, g); it != end; ++it) {
      const size_t v = boost::target(*it, g);
      if (res[*it] > 0 && !seen[v]) {
        seen[v] = 1;
        stack.push_back(v);
      }
    }
  }
  return seen;
}

}  // namespace gmt
