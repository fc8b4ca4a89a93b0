#pragma once

#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "qsrsr/exact_linalg.hpp"
#include "qsrsr/rational_matrix.hpp"

namespace qsrsr {

struct Arrow {
  std::string id;
  int tail = -1;
  int head = -1;
};

struct BipartiteSplit {
  std::vector<int> sources;  // Q0+
  std::vector<int> sinks;    // Q0-
};

// Finite acyclic quiver. Parallel arrows are allowed.
struct Quiver {
  std::vector<std::string> vertex_ids;
  std::vector<Arrow> arrows;
  std::optional<BipartiteSplit> bipartite_split;

  int add_vertex(const std::string& id);
  void add_arrow(const std::string& id, int tail, int head);
  int vertex_index(const std::string& id) const;  // -1 if absent

  std::size_t num_vertices() const { return vertex_ids.size(); }
  // Empty when the quiver has an oriented cycle.
  std::optional<std::vector<int>> topological_order() const;

 private:
  std::unordered_map<std::string, int> index_of_;
};

using DimVector = std::vector<int>;
using Weight = std::vector<long long>;

struct Representation {
  DimVector dim;                             // per vertex
  std::vector<RationalMatrix> arrow_matrix;  // per arrow, d(ha) x d(ta)
};

struct QuiverDatum {
  Quiver quiver;
  Representation rep;
  Weight weight;
};

// Per-vertex subspaces W(z) <= Q^{d(z)}, canonical bases.
struct Subrepresentation {
  std::vector<SubspaceBasis> space;

  DimVector dims() const;
};

struct Violation {
  std::string what;
  std::string where;
};

long long weight_pairing(const Weight& sigma, const DimVector& d);

// Checks acyclicity, matrix shape consistency, and sigma . dim V = 0.
std::vector<Violation> validate(const QuiverDatum& datum);

// True iff V(a)(W(ta)) <= W(ha) for every arrow, decided by exact rank
// comparison.
bool is_subrepresentation(const QuiverDatum& datum, const Subrepresentation& w);

struct BipartizeResult {
  QuiverDatum datum;                    // on Q^sigma
  std::vector<int> vertex_origin;      // Q^sigma vertex -> original vertex
  bool was_already_bipartite = false;
  bool zero_weight_vertices_present = false;  // flagged in reports
  std::size_t path_count = 0;
};

class PathExplosionError : public std::runtime_error {
 public:
  explicit PathExplosionError(const std::string& what) : std::runtime_error(what) {}
};

// Builds the bipartite quiver whose vertices are the sigma-positive and
// sigma-negative vertices, with one arrow per oriented path from a positive
// to a negative vertex; the arrow matrix is the product of the matrices
// along the path. Zero-weight vertices may appear inside paths but never as
// endpoints. Enumeration is depth-first; exceeding `path_cap` is an error,
// never a truncation.
BipartizeResult bipartize(const QuiverDatum& datum, std::size_t path_cap = 100000);

}  // namespace qsrsr
