#include <cmath>

#include "anglelab/bodies.hpp"
#include "anglelab/errors.hpp"
#include "anglelab/specfun.hpp"
#include "vecmath.hpp"

namespace anglelab {

namespace {

void propose_in_ball(const ConvexBody& body, RandomStream& stream, std::span<double> out) {
  stream.unit_vector(out);
  const double r = body.bounding_radius() * std::pow(stream.uniform(), 1.0 / body.dim());
  const auto& c = body.center();
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = c[i] + r * out[i];
}

class HitAndRun {
 public:
  HitAndRun(const ConvexBody& body, std::span<const double> start)
      : body_(body), x_(start.begin(), start.end()), dir_(start.size()) {}

  void step(RandomStream& stream) {
    stream.unit_vector(dir_);
    const auto c = body_.chord(dir_, x_, 0.0);
    if (!c) return;  // chord lost to tolerance; stay put
    const double t = stream.uniform(c->a, c->b);
    for (std::size_t i = 0; i < x_.size(); ++i) x_[i] += t * dir_[i];
  }
  const Point& position() const { return x_; }

 private:
  const ConvexBody& body_;
  Point x_;
  Point dir_;
};

}  // namespace

PointCloud sample(const ConvexBody& body, RandomStream& stream, std::size_t count,
                  const SamplerOptions& options) {
  if (count < 1) throw ValidationError("sample: count must be >= 1");
  const int d = body.dim();
  PointCloud cloud;
  cloud.dim = d;
  cloud.body = to_string(body.spec());
  cloud.seed = stream.seed();
  cloud.coords.resize(count * d);

  if (body.has_direct_sampler()) {
    for (std::size_t i = 0; i < count; ++i) body.sample_direct(stream, cloud.point(i));
    return cloud;
  }

  constexpr std::uint64_t kProbeWindow = 10'000;
  std::uint64_t proposals = 0, accepted = 0;
  Point x(d);
  std::size_t filled = 0;
  bool switch_to_walk = false;
  while (filled < count) {
    propose_in_ball(body, stream, x);
    ++proposals;
    if (body.contains(x)) {
      ++accepted;
      std::copy(x.begin(), x.end(), cloud.point(filled).begin());
      ++filled;
    }
    if (proposals >= kProbeWindow &&
        static_cast<double>(accepted) < options.min_acceptance * static_cast<double>(proposals)) {
      if (options.allow_hit_and_run) {
        switch_to_walk = true;
        break;
      }
      if (accepted == 0 && proposals >= options.starvation_limit)
        throw SamplingError("rejection sampling accepted nothing in " +
                            std::to_string(proposals) +
                            " proposals; enable hit-and-run for this body");
    }
  }
  if (!switch_to_walk) return cloud;

  Point start = filled > 0 ? Point(cloud.point(filled - 1).begin(), cloud.point(filled - 1).end())
                           : body.center();
  HitAndRun walk(body, start);
  const std::size_t burn_in = 10 * static_cast<std::size_t>(d) * d;
  for (std::size_t s = 0; s < burn_in; ++s) walk.step(stream);
  for (; filled < count; ++filled) {
    for (int s = 0; s < d; ++s) walk.step(stream);
    std::copy(walk.position().begin(), walk.position().end(), cloud.point(filled).begin());
  }
  return cloud;
}

VolumeEstimate estimate_volume(const ConvexBody& body, RandomStream& stream,
                               std::uint64_t samples) {
  if (samples < 1) throw ValidationError("estimate_volume: samples must be >= 1");
  Point x(body.dim());
  std::uint64_t hits = 0;
  for (std::uint64_t i = 0; i < samples; ++i) {
    propose_in_ball(body, stream, x);
    if (body.contains(x)) ++hits;
  }
  const double ball = ball_volume(body.dim(), body.bounding_radius());
  const double p = static_cast<double>(hits) / static_cast<double>(samples);
  return {ball * p, ball * std::sqrt(p * (1.0 - p) / static_cast<double>(samples)), samples};
}

}  // namespace anglelab
