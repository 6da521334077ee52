#pragma once

#include <cstdint>
#include <vector>

#include "efp/image.hpp"
#include "efp/problem.hpp"
#include "efp/raster.hpp"

namespace efp {

/// Student-teacher regression: inputs uniform on the unit sphere, labels from
/// a fixed random cosine-activation teacher of the given width (signed unit
/// output weights), squared losses over tanh neurons. teacher_width = 0
/// gives the all-zero-label sanity problem.
Problem make_student_teacher(std::size_t n, std::size_t d,
                             std::size_t teacher_width, std::uint64_t seed,
                             double lambda, double lambda_prime);

/// Mixture density estimation: neg-log losses over Gaussian kernels centred
/// at the observations (obs_flat is n x d row-major).
Problem make_density_problem(std::vector<double> obs_flat, std::size_t d,
                             double sigma, double lambda, double lambda_prime);

/// 1-D self-consistency toy: n = 1, squared loss toward `target`,
/// h(theta) = theta_1.
Problem make_toy1d_problem(double target, double lambda, double lambda_prime);

/// Image synthesis: one squared loss per pixel of the target, triangle-pixel
/// features, n = width * height, d = 8.
Problem make_synth_image_problem(const GrayImage& target, double edge_sharpness,
                                 double lambda, double lambda_prime);

/// Exact mean of the 1-D Gibbs measure for the toy problem at tracked value
/// H (the potential completes to a Gaussian), and the self-consistent fixed
/// point solved by damped scalar iteration. The other half of the dual-route
/// check against the particle dynamics.
double toy1d_gibbs_mean(const Problem& toy, double H);
double toy1d_fixed_point(const Problem& toy, double damping = 0.5,
                         std::size_t iters = 10000, double tol = 1e-13);

}  // namespace efp
