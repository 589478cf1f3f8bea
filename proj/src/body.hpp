#pragma once

#include <optional>
#include <string>

#include "hilbert/domain.hpp"

namespace hilbert::detail {

class Body {
 public:
  virtual ~Body() = default;

  virtual DomainKind kind() const = 0;
  virtual int dimension() const = 0;
  virtual std::string description() const = 0;
  virtual bool strictly_convex() const { return true; }
  virtual double angular_resolution() const { return 0.0; }
  virtual std::vector<Vec> vertices() const { return {}; }

  // Negative inside, zero on the boundary, positive outside.
  virtual double value(const Vec& x) const = 0;
  // value(p + y) with p taken as an exact boundary point.
  virtual double value_local(const Vec& p, const Vec& y) const { return value(p + y) - value(p); }
  virtual std::optional<Vec> gradient(const Vec& p) const = 0;
  // Throws NonSmoothPoint where the boundary has a corner.
  virtual void check_smooth(const Vec&) const {}

  // Distance along v from base + y (anchored: base is on the boundary).
  virtual double hit(const Vec& base, const Vec& y, const Vec& v, bool anchored) const;
  virtual std::optional<ChordEndpoints> exact_chord(const Vec&, const Vec&) const { return std::nullopt; }

  virtual std::optional<Hyperplane> tangent(const Vec&) const { return std::nullopt; }

  // f(p + E c) for the frame E (first column the unit outward normal, |grad f(p)| = gn),
  // with the linear part taken as exactly gn * c_0.
  virtual double local_value(const Vec& p, const Mat& E, double, const Vec& c) const { return value_local(p, E * c); }
  // Distance along the frame direction d (unit) from p + E c.
  virtual double local_hit(const Vec& p, const Mat& E, double gn, const Vec& c, const Vec& d) const;
  // Normal used for the local frame; polytopes return the active face.
  virtual Vec frame_normal(const Vec& p) const;

  const Vec& center() const { return center_; }
  double radius() const { return radius_; }

 protected:
  Vec center_;
  double radius_ = 1.0;
};

}  // namespace hilbert::detail
