#include "coocnet/exporters.hpp"

#include <ostream>

#include "coocnet/csv.hpp"

namespace coocnet {

namespace {

std::string xml_escape(std::string_view s) {
  std::string out;
  out.reserve(s.size());
  for (const char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      case '\'': out += "&apos;"; break;
      default: out.push_back(c);
    }
  }
  return out;
}

std::string dot_escape(std::string_view s) {
  std::string out;
  out.reserve(s.size() + 2);
  out.push_back('"');
  for (const char c : s) {
    if (c == '"' || c == '\\') out.push_back('\\');
    out.push_back(c);
  }
  out.push_back('"');
  return out;
}

void write_graphml_prologue(std::ostream& out,
                            const std::vector<std::string>& comments) {
  out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  for (const auto& comment : comments) {
    out << "<!-- " << xml_escape(comment) << " -->\n";
  }
  out << "<graphml xmlns=\"http://graphml.graphdrawing.org/xmlns\">\n";
}

} // namespace

void write_projection_graphml(std::ostream& out, const Projection& p,
                              const std::vector<std::string>& comments) {
  write_graphml_prologue(out, comments);
  out << "  <key id=\"w\" for=\"edge\" attr.name=\"weight\" attr.type=\"int\"/>\n";
  out << "  <graph id=\"projection\" edgedefault=\"undirected\">\n";
  for (const auto& node : p.outlets) {
    out << "    <node id=\"" << xml_escape(node) << "\"/>\n";
  }
  for (const auto& [i, j, w] : p.nonzero_pairs()) {
    out << "    <edge source=\"" << xml_escape(p.outlets[i]) << "\" target=\""
        << xml_escape(p.outlets[j]) << "\"><data key=\"w\">" << w
        << "</data></edge>\n";
  }
  out << "  </graph>\n</graphml>\n";
}

void write_validated_graphml(std::ostream& out, const ValidatedNetwork& v,
                             const std::vector<std::string>& comments) {
  write_graphml_prologue(out, comments);
  out << "  <key id=\"sign\" for=\"edge\" attr.name=\"sign\" attr.type=\"string\"/>\n";
  out << "  <key id=\"z\" for=\"edge\" attr.name=\"z\" attr.type=\"double\"/>\n";
  out << "  <key id=\"w\" for=\"edge\" attr.name=\"weight\" attr.type=\"int\"/>\n";
  out << "  <graph id=\"backbone\" edgedefault=\"undirected\">\n";
  for (const auto& node : v.nodes) {
    out << "    <node id=\"" << xml_escape(node) << "\"/>\n";
  }
  for (const auto& e : v.edges) {
    out << "    <edge source=\"" << xml_escape(e.from) << "\" target=\""
        << xml_escape(e.to) << "\">"
        << "<data key=\"sign\">"
        << (e.sign == EdgeSign::positive ? "positive" : "negative")
        << "</data>"
        << "<data key=\"z\">" << format_double(e.z) << "</data>"
        << "<data key=\"w\">" << e.w_obs << "</data>"
        << "</edge>\n";
  }
  out << "  </graph>\n</graphml>\n";
}

void write_validated_dot(std::ostream& out, const ValidatedNetwork& v,
                         const std::vector<std::string>& comments) {
  for (const auto& comment : comments) out << "// " << comment << "\n";
  out << "graph backbone {\n";
  for (const auto& node : v.nodes) {
    out << "  " << dot_escape(node) << ";\n";
  }
  for (const auto& e : v.edges) {
    out << "  " << dot_escape(e.from) << " -- " << dot_escape(e.to)
        << " [sign=" << (e.sign == EdgeSign::positive ? "positive" : "negative")
        << ", z=" << format_double(e.z) << ", weight=" << e.w_obs << "];\n";
  }
  out << "}\n";
}

} // namespace coocnet
