#pragma once

#include <array>
#include <vector>

namespace gaugemc {

// Rectangular loop in a coordinate plane: corner site, extents along the
// plane's two axes. Extents are restricted to 1..L-1; an extent of L would
// wind the torus and no longer bounds a minimal area.
struct WilsonLoopSpec {
  int plane = 0;
  int corner = 0;
  int extent_a = 1;
  int extent_b = 1;

  bool operator==(const WilsonLoopSpec&) const = default;
};

// Periodic hypercubic lattice, d in {2, 3}. Sites are row-major with the
// x coordinate fastest; links are direction-major (dir * n_sites + site);
// plaquettes are plane-major (plane * n_sites + site). All indexing is pure
// arithmetic, so a Lattice is free to construct and copy; precomputed
// incidence tables live in CouplingGraph where the hot loops need them.
class Lattice {
 public:
  Lattice(int dim, int size);

  int dim() const { return dim_; }
  int size() const { return size_; }
  int n_sites() const { return n_sites_; }
  int n_links() const { return dim_ * n_sites_; }
  int n_plaquettes() const { return n_planes() * n_sites_; }
  int n_planes() const { return dim_ * (dim_ - 1) / 2; }

  // Planes in lexicographic axis order: 3D gives (0,1), (0,2), (1,2).
  std::array<int, 2> plane_axes(int plane) const;
  int plane_index(int axis_a, int axis_b) const;

  std::array<int, 3> site_coords(int site) const;  // unused axes are 0
  int site_at(int x, int y, int z = 0) const;      // wraps mod L
  int shift_site(int site, int axis, int delta) const;

  int link_id(int site, int dir) const;
  int link_site(int link) const;
  int link_dir(int link) const;

  int plaquette_id(int site, int plane) const;
  int plaquette_site(int p) const;
  int plaquette_plane(int p) const;

  // Boundary walk of plaquette p at site s in plane (a,b):
  // (s,a), (s+e_a,b), (s+e_b,a), (s,b). Always 4 distinct links.
  std::array<int, 4> links_of_plaquette(int p) const;

  // Plaquettes containing a link: 4 in 3D, 2 in 2D.
  std::vector<int> plaquettes_of_link(int link) const;

  // Ordered closed walk around the rectangle; 2*(R+S) links, each once.
  std::vector<int> loop_links(const WilsonLoopSpec& spec) const;

  void check_site(int site) const;
  void check_link(int link) const;
  void check_plaquette(int p) const;
  void check_loop_spec(const WilsonLoopSpec& spec) const;

 private:
  int wrap(int c) const { return ((c % size_) + size_) % size_; }

  int dim_;
  int size_;
  int n_sites_;
};

}  // namespace gaugemc
