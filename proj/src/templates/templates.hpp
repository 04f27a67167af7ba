#pragma once

#include <string>

#include "structures/structure.hpp"

namespace ppw {

enum class TemplateKind { NU, NUStar, Hypergraph, Clique, Parity };

struct TemplateSpec {
  TemplateKind kind = TemplateKind::NU;
  int ell = 3;  // NU, NUStar
  int r = 3;    // NUStar, Hypergraph, Parity
  int m = 3;    // Hypergraph, Clique

  int arity() const;
  std::string name() const;
  void validate() const;
};

// "nu:L", "nustar:R,L", "hypergraph:R,M", "clique:M", "parity:R"
TemplateSpec parse_template(const std::string& text);
Structure build_template(const TemplateSpec& spec);

// Universe {0,1,2}; relations R0,R1,R2 of arity ell+1.
Structure template_nu(int ell);
// Universe {0,1,2}; relations R0,R1,R2 of arity (2r+1) + |separator set|.
Structure template_nu_star(int r, int ell);
// Universe {1..m}, one symbol "R" holding all injective r-tuples (none when m < r).
Structure uniform_hypergraph(int r, int m);
// Universe {1..m}, symbol "E": the complete graph.
Structure clique_template(int m);
// Universe {0,1}; relations R0,R1 by parity of the coordinate sum.
Structure parity_template(int r);

}  // namespace ppw
