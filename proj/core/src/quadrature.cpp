#include "twinfringe/quadrature.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <sstream>
#include <vector>

#include "twinfringe/errors.hpp"

namespace twinfringe::special
{

namespace
{

// Kronrod abscissae (descending, last is the centre) and weights; the Gauss
// 7-point rule uses the odd-indexed abscissae and the centre.
constexpr std::array<double, 8> kXgk = {
  0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
  0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
  0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
  0.207784955007898467600689403773245, 0.0};
constexpr std::array<double, 8> kWgk = {
  0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
  0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
  0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
  0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
constexpr std::array<double, 4> kWg = {
  0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
  0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Segment
{
  double a;
  double b;
  double value;
  double error;
};

Segment gauss_kronrod(const std::function<double(double)>& f, double a, double b)
{
  const double centre = 0.5 * (a + b);
  const double half = 0.5 * (b - a);

  const double fc = f(centre);
  double kronrod = kWgk[7] * fc;
  double gauss = kWg[3] * fc;
  for (std::size_t j = 0; j < 7; ++j)
  {
    const double dx = half * kXgk[j];
    const double pair = f(centre - dx) + f(centre + dx);
    kronrod += kWgk[j] * pair;
    if (j % 2 == 1)
      gauss += kWg[j / 2] * pair;
  }
  kronrod *= half;
  gauss *= half;
  if (!std::isfinite(kronrod))
  {
    std::ostringstream msg;
    msg << "integrand not finite on [" << a << ", " << b << "]";
    throw Error(ErrorCode::ToleranceNotReached, msg.str());
  }
  return {a, b, kronrod, std::abs(kronrod - gauss)};
}

bool by_error(const Segment& lhs, const Segment& rhs)
{
  return lhs.error < rhs.error;
}

} // namespace

QuadratureResult integrate_radial(const std::function<double(double)>& f,
                                  double lower, double upper, double abs_tol,
                                  const QuadratureOptions& options)
{
  if (!(lower < upper) || !std::isfinite(lower) || !std::isfinite(upper))
    throw Error(ErrorCode::UsageError, "integrate_radial requires finite lower < upper");
  if (!(abs_tol > 0.0))
    throw Error(ErrorCode::UsageError, "integrate_radial requires abs_tol > 0");

  std::vector<Segment> heap;
  heap.reserve(64);
  heap.push_back(gauss_kronrod(f, lower, upper));
  std::size_t evaluations = 15;

  auto total = [&heap](double Segment::*field) {
    // Sum in ascending order of magnitude for a stable total.
    std::vector<double> parts;
    parts.reserve(heap.size());
    for (const Segment& s : heap)
      parts.push_back(s.*field);
    std::sort(parts.begin(), parts.end(),
              [](double x, double y) { return std::abs(x) < std::abs(y); });
    double sum = 0.0;
    for (double p : parts)
      sum += p;
    return sum;
  };

  double error = heap.front().error;
  while (error > abs_tol)
  {
    if (heap.size() >= options.max_intervals)
    {
      std::ostringstream msg;
      msg << "error estimate " << error << " > " << abs_tol << " after "
          << heap.size() << " intervals";
      throw Error(ErrorCode::ToleranceNotReached, msg.str());
    }
    std::pop_heap(heap.begin(), heap.end(), by_error);
    const Segment worst = heap.back();
    heap.pop_back();

    const double mid = 0.5 * (worst.a + worst.b);
    if (!(worst.a < mid && mid < worst.b))
    {
      std::ostringstream msg;
      msg << "interval [" << worst.a << ", " << worst.b
          << "] cannot be split further; error estimate " << error;
      throw Error(ErrorCode::ToleranceNotReached, msg.str());
    }
    for (const Segment& half : {gauss_kronrod(f, worst.a, mid), gauss_kronrod(f, mid, worst.b)})
    {
      heap.push_back(half);
      std::push_heap(heap.begin(), heap.end(), by_error);
    }
    evaluations += 30;
    error = total(&Segment::error);
  }

  return {total(&Segment::value), error, evaluations, heap.size()};
}

} // namespace twinfringe::special
