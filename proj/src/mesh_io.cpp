#include "idpdg/mesh.hpp"

#include <charconv>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace idpdg {

namespace {

std::string format_double(double v) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

struct LineReader {
  std::istream& is;
  int line_no{0};

  std::istringstream next(const char* what) {
    std::string line;
    while (std::getline(is, line)) {
      ++line_no;
      if (!line.empty() && line[0] != '#') return std::istringstream(line);
    }
    throw std::runtime_error(std::string("mesh file ended while reading ") + what);
  }

  [[noreturn]] void fail(const std::string& msg) const {
    throw std::runtime_error("mesh file line " + std::to_string(line_no) + ": " + msg);
  }
};

}  // namespace

template <int Dim>
void write_mesh(std::ostream& os, const Mesh<Dim>& mesh) {
  os << "MESH " << Dim << " " << mesh.mapping_degree << "\n";
  os << "NODES " << mesh.nodes.size() << "\n";
  for (const auto& x : mesh.nodes) {
    for (int d = 0; d < Dim; ++d) os << (d ? " " : "") << format_double(x(d));
    os << "\n";
  }
  os << "ELEMS " << mesh.elements.size() << "\n";
  for (const auto& ids : mesh.elements) {
    for (std::size_t a = 0; a < ids.size(); ++a) os << (a ? " " : "") << ids[a];
    os << "\n";
  }
  std::ostringstream body;
  int count = 0;
  for (int e = 0; e < mesh.num_elements(); ++e) {
    for (int f = 0; f < 2 * Dim; ++f) {
      const auto& link = mesh.faces[e][f];
      if (link.tag == BoundaryTag::Interior) continue;
      body << e << " " << f << " " << to_string(link.tag);
      if (link.tag == BoundaryTag::Periodic) body << " " << link.element << " " << link.face;
      body << "\n";
      ++count;
    }
  }
  os << "BOUNDARY " << count << "\n" << body.str();
}

template <int Dim>
Mesh<Dim> read_mesh(std::istream& is) {
  LineReader in{is};
  Mesh<Dim> mesh;
  std::string keyword;
  int dim = 0;
  {
    auto ls = in.next("header");
    if (!(ls >> keyword >> dim >> mesh.mapping_degree) || keyword != "MESH") in.fail("expected 'MESH <dim> <degree>'");
    if (dim != Dim) in.fail("mesh dimension " + std::to_string(dim) + " does not match " + std::to_string(Dim));
    if (mesh.mapping_degree < 1 || mesh.mapping_degree > 2) in.fail("mapping degree must be 1 or 2");
  }
  std::size_t n = 0;
  {
    auto ls = in.next("NODES");
    if (!(ls >> keyword >> n) || keyword != "NODES") in.fail("expected 'NODES <count>'");
  }
  mesh.nodes.resize(n);
  for (auto& x : mesh.nodes) {
    auto ls = in.next("node");
    for (int d = 0; d < Dim; ++d)
      if (!(ls >> x(d))) in.fail("bad node coordinates");
  }
  {
    auto ls = in.next("ELEMS");
    if (!(ls >> keyword >> n) || keyword != "ELEMS") in.fail("expected 'ELEMS <count>'");
  }
  mesh.elements.resize(n);
  const int per = mesh.nodes_per_element();
  for (auto& ids : mesh.elements) {
    auto ls = in.next("element");
    ids.resize(per);
    for (auto& id : ids) {
      if (!(ls >> id) || id < 0 || id >= static_cast<int>(mesh.nodes.size())) in.fail("bad element node id");
    }
  }
  mesh.faces.assign(mesh.elements.size(), {});
  {
    auto ls = in.next("BOUNDARY");
    if (!(ls >> keyword >> n) || keyword != "BOUNDARY") in.fail("expected 'BOUNDARY <count>'");
  }
  for (std::size_t i = 0; i < n; ++i) {
    auto ls = in.next("boundary face");
    int e = -1, f = -1;
    std::string tag;
    if (!(ls >> e >> f >> tag) || e < 0 || e >= mesh.num_elements() || f < 0 || f >= 2 * Dim)
      in.fail("bad boundary entry");
    FaceLink link;
    try {
      link.tag = parse_boundary_tag(tag);
    } catch (const std::exception& ex) {
      in.fail(ex.what());
    }
    if (link.tag == BoundaryTag::Periodic && !(ls >> link.element >> link.face)) in.fail("periodic face needs a partner");
    mesh.faces[e][f] = link;
  }
  connect_faces(mesh);
  return mesh;
}

template void write_mesh<1>(std::ostream&, const Mesh<1>&);
template void write_mesh<2>(std::ostream&, const Mesh<2>&);
template Mesh<1> read_mesh<1>(std::istream&);
template Mesh<2> read_mesh<2>(std::istream&);

}  // namespace idpdg
