#include "lrk/fft.hpp"

#include <mutex>

#include <fftw3.h>

#include "lrk/error.hpp"

namespace lrk {

namespace {

std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

constexpr unsigned kFlags = FFTW_ESTIMATE | FFTW_UNALIGNED;

// Plans one in-place batch; rank-1 transforms of length n, `howmany` of them.
fftw_plan plan_many(int n, int howmany, int stride, int dist, int sign) {
  std::lock_guard lock(planner_mutex());
  const std::size_t extent =
      static_cast<std::size_t>((howmany - 1) * dist + (n - 1) * stride + 1);
  auto* buffer = fftw_alloc_complex(extent);
  fftw_plan p = fftw_plan_many_dft(1, &n, howmany, buffer, nullptr, stride, dist,
                                   buffer, nullptr, stride, dist, sign, kFlags);
  fftw_free(buffer);
  if (!p) throw InternalError("FFTW planning failed");
  return p;
}

fftw_plan plan_2d(int n0, int n1, int sign) {
  std::lock_guard lock(planner_mutex());
  auto* buffer = fftw_alloc_complex(static_cast<std::size_t>(n0) * n1);
  fftw_plan p = fftw_plan_dft_2d(n0, n1, buffer, buffer, sign, kFlags);
  fftw_free(buffer);
  if (!p) throw InternalError("FFTW planning failed");
  return p;
}

void destroy(fftw_plan p) {
  std::lock_guard lock(planner_mutex());
  if (p) fftw_destroy_plan(p);
}

void run(fftw_plan p, cplx* data) {
  auto* d = reinterpret_cast<fftw_complex*>(data);
  fftw_execute_dft(p, d, d);
}

}  // namespace

struct Fft1D::Impl {
  fftw_plan fwd = nullptr;
  fftw_plan bwd = nullptr;
};

Fft1D::Fft1D(int n) : n_(n), impl_(std::make_unique<Impl>()) {
  if (n < 1) throw PreconditionError("Fft1D: size must be positive");
  impl_->fwd = plan_many(n, 1, 1, n, FFTW_FORWARD);
  impl_->bwd = plan_many(n, 1, 1, n, FFTW_BACKWARD);
}

Fft1D::~Fft1D() {
  destroy(impl_->fwd);
  destroy(impl_->bwd);
}

void Fft1D::forward(cplx* data) const { run(impl_->fwd, data); }
void Fft1D::backward(cplx* data) const { run(impl_->bwd, data); }

struct Fft2D::Impl {
  fftw_plan fwd = nullptr, bwd = nullptr;
  fftw_plan fwd0 = nullptr, bwd0 = nullptr;
  fftw_plan fwd1 = nullptr, bwd1 = nullptr;
};

Fft2D::Fft2D(int n0, int n1) : n0_(n0), n1_(n1), impl_(std::make_unique<Impl>()) {
  if (n0 < 1 || n1 < 1) throw PreconditionError("Fft2D: sizes must be positive");
  impl_->fwd = plan_2d(n0, n1, FFTW_FORWARD);
  impl_->bwd = plan_2d(n0, n1, FFTW_BACKWARD);
  impl_->fwd0 = plan_many(n0, n1, n1, 1, FFTW_FORWARD);
  impl_->bwd0 = plan_many(n0, n1, n1, 1, FFTW_BACKWARD);
  impl_->fwd1 = plan_many(n1, n0, 1, n1, FFTW_FORWARD);
  impl_->bwd1 = plan_many(n1, n0, 1, n1, FFTW_BACKWARD);
}

Fft2D::~Fft2D() {
  for (fftw_plan p : {impl_->fwd, impl_->bwd, impl_->fwd0, impl_->bwd0, impl_->fwd1,
                      impl_->bwd1})
    destroy(p);
}

void Fft2D::forward(cplx* data) const { run(impl_->fwd, data); }
void Fft2D::backward(cplx* data) const { run(impl_->bwd, data); }
void Fft2D::forward_axis0(cplx* data) const { run(impl_->fwd0, data); }
void Fft2D::backward_axis0(cplx* data) const { run(impl_->bwd0, data); }
void Fft2D::forward_axis1(cplx* data) const { run(impl_->fwd1, data); }
void Fft2D::backward_axis1(cplx* data) const { run(impl_->bwd1, data); }

}  // namespace lrk
