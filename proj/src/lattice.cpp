#include "gaugemc/lattice.hpp"

#include <stdexcept>
#include <string>

namespace gaugemc {

Lattice::Lattice(int dim, int size) : dim_(dim), size_(size) {
  if (dim != 2 && dim != 3)
    throw std::invalid_argument("lattice dimension must be 2 or 3, got " +
                                std::to_string(dim));
  if (size < 2)
    throw std::invalid_argument("lattice size must be >= 2, got " +
                                std::to_string(size));
  n_sites_ = size_ * size_;
  if (dim_ == 3) n_sites_ *= size_;
}

std::array<int, 2> Lattice::plane_axes(int plane) const {
  if (plane < 0 || plane >= n_planes())
    throw std::out_of_range("plane index out of range");
  if (dim_ == 2) return {0, 1};
  static constexpr std::array<std::array<int, 2>, 3> kPlanes = {
      {{0, 1}, {0, 2}, {1, 2}}};
  return kPlanes[plane];
}

int Lattice::plane_index(int axis_a, int axis_b) const {
  if (axis_a > axis_b) std::swap(axis_a, axis_b);
  if (axis_a < 0 || axis_b >= dim_ || axis_a == axis_b)
    throw std::invalid_argument("invalid plane axes");
  if (dim_ == 2) return 0;
  return axis_a + axis_b - 1;  // (0,1)->0, (0,2)->1, (1,2)->2
}

std::array<int, 3> Lattice::site_coords(int site) const {
  check_site(site);
  std::array<int, 3> c{0, 0, 0};
  c[0] = site % size_;
  c[1] = (site / size_) % size_;
  if (dim_ == 3) c[2] = site / (size_ * size_);
  return c;
}

int Lattice::site_at(int x, int y, int z) const {
  int site = wrap(y) * size_ + wrap(x);
  if (dim_ == 3) site += wrap(z) * size_ * size_;
  return site;
}

int Lattice::shift_site(int site, int axis, int delta) const {
  auto c = site_coords(site);
  c[axis] = wrap(c[axis] + delta);
  return site_at(c[0], c[1], c[2]);
}

int Lattice::link_id(int site, int dir) const {
  check_site(site);
  if (dir < 0 || dir >= dim_) throw std::out_of_range("link direction out of range");
  return dir * n_sites_ + site;
}

int Lattice::link_site(int link) const {
  check_link(link);
  return link % n_sites_;
}

int Lattice::link_dir(int link) const {
  check_link(link);
  return link / n_sites_;
}

int Lattice::plaquette_id(int site, int plane) const {
  check_site(site);
  if (plane < 0 || plane >= n_planes())
    throw std::out_of_range("plane index out of range");
  return plane * n_sites_ + site;
}

int Lattice::plaquette_site(int p) const {
  check_plaquette(p);
  return p % n_sites_;
}

int Lattice::plaquette_plane(int p) const {
  check_plaquette(p);
  return p / n_sites_;
}

std::array<int, 4> Lattice::links_of_plaquette(int p) const {
  check_plaquette(p);
  int s = p % n_sites_;
  auto [a, b] = plane_axes(p / n_sites_);
  return {link_id(s, a), link_id(shift_site(s, a, 1), b),
          link_id(shift_site(s, b, 1), a), link_id(s, b)};
}

std::vector<int> Lattice::plaquettes_of_link(int link) const {
  check_link(link);
  int s = link % n_sites_;
  int dir = link / n_sites_;
  std::vector<int> out;
  out.reserve(2 * (dim_ - 1));
  for (int other = 0; other < dim_; ++other) {
    if (other == dir) continue;
    int plane = plane_index(dir, other);
    out.push_back(plaquette_id(s, plane));
    out.push_back(plaquette_id(shift_site(s, other, -1), plane));
  }
  return out;
}

std::vector<int> Lattice::loop_links(const WilsonLoopSpec& spec) const {
  check_loop_spec(spec);
  auto [a, b] = plane_axes(spec.plane);
  int R = spec.extent_a;
  int S = spec.extent_b;
  std::vector<int> out;
  out.reserve(2 * (R + S));
  int s = spec.corner;
  for (int k = 0; k < R; ++k) out.push_back(link_id(shift_site(s, a, k), a));
  int corner_a = shift_site(s, a, R);
  for (int k = 0; k < S; ++k)
    out.push_back(link_id(shift_site(corner_a, b, k), b));
  int corner_b = shift_site(s, b, S);
  for (int k = R - 1; k >= 0; --k)
    out.push_back(link_id(shift_site(corner_b, a, k), a));
  for (int k = S - 1; k >= 0; --k) out.push_back(link_id(shift_site(s, b, k), b));
  return out;
}

void Lattice::check_site(int site) const {
  if (site < 0 || site >= n_sites_) throw std::out_of_range("site id out of range");
}

void Lattice::check_link(int link) const {
  if (link < 0 || link >= n_links()) throw std::out_of_range("link id out of range");
}

void Lattice::check_plaquette(int p) const {
  if (p < 0 || p >= n_plaquettes())
    throw std::out_of_range("plaquette id out of range");
}

void Lattice::check_loop_spec(const WilsonLoopSpec& spec) const {
  if (spec.plane < 0 || spec.plane >= n_planes())
    throw std::out_of_range("loop plane out of range");
  check_site(spec.corner);
  if (spec.extent_a < 1 || spec.extent_a > size_ - 1 || spec.extent_b < 1 ||
      spec.extent_b > size_ - 1)
    throw std::invalid_argument("loop extents must be in 1..L-1");
}

}  // namespace gaugemc
