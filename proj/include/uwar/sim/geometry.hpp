#pragma once

#include "uwar/core.hpp"
#include "uwar/sim/scenario.hpp"

#include <array>

namespace uwar::sim {

struct QuadVertices {
  Vec2 a, b, c, d;
  const Vec2& operator[](char name) const;
  std::array<Vec2, 4> as_array() const { return {a, b, c, d}; }
};

/// Places A at the origin and B on +x, then intersects circles for D (from
/// AD, BD) and C (from AC, CD). C is taken on the same side of line AD as B so
/// that A-B-C-D is a counterclockwise convex loop. Throws
/// std::invalid_argument when a triangle inequality fails for ABD or ACD.
QuadVertices solve_quadrilateral(const QuadLengths& lengths);

/// Rotation (counterclockwise, radians) that turns side A->C to the given
/// compass bearing (degrees clockwise from north = +y).
double course_rotation(const QuadVertices& local, double heading_offset_deg);

/// Course vertices in the world frame (A stays at the origin).
QuadVertices course_vertices(const CourseMotion& course);

/// Ground truth for the course: A->B->C->D->A repeated `laps` times at
/// constant depth, corners rounded with `corner_radius`, heading tangent to the
/// path, body level. The first sample sits exactly on A; samples are taken at
/// k / rate up to the time the path returns to A.
Trajectory build_course(const CourseMotion& course, double rate);

/// Analytic hover motion sampled at `rate`.
Trajectory build_hover(const HoverMotion& hover, double rate);

/// Truth for a scenario, sampled at max(imu_rate, vio_rate).
Trajectory build_truth(const Scenario& scenario);

/// Length of the rounded-corner path of one CourseMotion (all laps).
double course_length(const CourseMotion& course);

}  // namespace uwar::sim
