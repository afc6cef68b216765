#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "coocnet/graph.hpp"
#include "coocnet/null_model.hpp"

namespace coocnet {

/// GraphML with an integer weight attribute per edge.
void write_projection_graphml(std::ostream& out, const Projection& p,
                              const std::vector<std::string>& comments = {});

/// GraphML with sign, z and weight attributes per edge.
void write_validated_graphml(std::ostream& out, const ValidatedNetwork& v,
                             const std::vector<std::string>& comments = {});

/// Undirected DOT with sign/z edge attributes.
void write_validated_dot(std::ostream& out, const ValidatedNetwork& v,
                         const std::vector<std::string>& comments = {});

} // namespace coocnet
