// Python bindings. Images travel as float64 (H, W) arrays, flow fields as
// (H, W, 2) arrays with NaN marking invalid pixels.

#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include <cmath>
#include <limits>

#include "blpc/bilateral.hpp"
#include "blpc/errors.hpp"
#include "blpc/estimator.hpp"
#include "blpc/flo_io.hpp"
#include "blpc/flow_color.hpp"
#include "blpc/framework.hpp"
#include "blpc/image_io.hpp"
#include "blpc/metrics.hpp"
#include "blpc/spectral.hpp"
#include "blpc/synth.hpp"

namespace py = pybind11;
using namespace blpc;

namespace {

using Array = py::array_t<double, py::array::c_style | py::array::forcecast>;

Image to_image(const Array& a) {
  if (a.ndim() != 2) throw DimensionError("expected a 2-D array");
  const auto h = static_cast<int>(a.shape(0));
  const auto w = static_cast<int>(a.shape(1));
  return Image(w, h, std::vector<double>(a.data(), a.data() + a.size()));
}

Array from_image(const Image& img) {
  Array out({img.height(), img.width()});
  std::copy(img.data().begin(), img.data().end(), out.mutable_data());
  return out;
}

FlowField to_flow(const Array& a) {
  if (a.ndim() != 3 || a.shape(2) != 2) throw DimensionError("expected an (H, W, 2) array");
  const auto h = static_cast<int>(a.shape(0));
  const auto w = static_cast<int>(a.shape(1));
  FlowField f(w, h);
  const double* p = a.data();
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w; ++x, p += 2) {
      if (std::isfinite(p[0]) && std::isfinite(p[1])) {
        f(x, y) = {p[0], p[1]};
      } else {
        f.set_valid(x, y, false);
      }
    }
  return f;
}

Array from_flow(const FlowField& f) {
  Array out({f.height(), f.width(), 2});
  double* p = out.mutable_data();
  const double nan = std::numeric_limits<double>::quiet_NaN();
  for (int y = 0; y < f.height(); ++y)
    for (int x = 0; x < f.width(); ++x, p += 2) {
      p[0] = f.valid(x, y) ? f(x, y).dx : nan;
      p[1] = f.valid(x, y) ? f(x, y).dy : nan;
    }
  return out;
}

py::object ratio_value(const PeakRatio& r) {
  if (r.is_single_peak()) return py::float_(std::numeric_limits<double>::infinity());
  return py::float_(r.value());
}

py::dict estimate_dict(const PointEstimate& e) {
  py::dict d;
  d["location"] = py::make_tuple(e.location.x, e.location.y);
  d["flow"] = py::make_tuple(e.flow.dx, e.flow.dy);
  d["ratio"] = ratio_value(e.ratio);
  d["filtered_ratio"] = e.filtered_ratio ? ratio_value(*e.filtered_ratio) : py::none();
  d["method"] = to_string(e.method);
  d["peak_value"] = e.peak_value;
  d["degraded"] = e.degraded;
  d["valid"] = e.valid;
  return d;
}

BilateralParams params_for(int window_size, std::optional<double> sigma_r, std::optional<int> slice_m) {
  BilateralParams p = BilateralParams::defaults_for(window_size);
  if (sigma_r) p.sigma_r = *sigma_r;
  if (slice_m) p.slice_m = *slice_m;
  return p;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Bilateral phase correlation optical flow";

  auto base = py::register_exception<Error>(m, "Error", PyExc_RuntimeError);
  py::register_exception<DimensionError>(m, "DimensionError", base.ptr());
  py::register_exception<ConfigError>(m, "ConfigError", base.ptr());
  py::register_exception<DegenerateInputError>(m, "DegenerateInputError", base.ptr());
  py::register_exception<ParseError>(m, "ParseError", base.ptr());
  py::register_exception<UnsupportedFormatError>(m, "UnsupportedFormatError", base.ptr());
  py::register_exception<FormatError>(m, "FormatError", base.ptr());
  py::register_exception<LengthError>(m, "LengthError", base.ptr());
  py::register_exception<SpecError>(m, "SpecError", base.ptr());
  py::register_exception<IoError>(m, "IoError", base.ptr());

  m.def(
      "phase_correlation",
      [](const Array& a, const Array& b) {
        const CorrelationSurface s = phase_correlation_surface(to_image(a), to_image(b));
        Array surf({s.height, s.width});
        std::copy(s.data.begin(), s.data.end(), surf.mutable_data());
        const FlowVector shift = subpixel_refine(s);
        py::dict d;
        d["surface"] = surf;
        d["peak1"] = py::make_tuple(s.peak1.location.x, s.peak1.location.y, s.peak1.value);
        d["peak2"] = py::make_tuple(s.peak2.location.x, s.peak2.location.y, s.peak2.value);
        d["ratio"] = ratio_value(peak_ratio(s));
        d["shift"] = py::make_tuple(shift.dx, shift.dy);
        return d;
      },
      py::arg("a"), py::arg("b"), "Phase correlation surface, peaks, ratio and subpixel shift of b against a.");

  m.def(
      "pc_estimate",
      [](const Array& f1, const Array& f2, int x, int y, int window_size) {
        return estimate_dict(pc_estimate(to_image(f1), to_image(f2), {x, y}, window_size));
      },
      py::arg("frame1"), py::arg("frame2"), py::arg("x"), py::arg("y"), py::arg("window_size") = 32);

  m.def(
      "blpc_estimate",
      [](const Array& f1, const Array& f2, int x, int y, int window_size, std::optional<double> sigma_r,
         std::optional<int> slice_m) {
        return estimate_dict(
            blpc_estimate(to_image(f1), to_image(f2), {x, y}, window_size, params_for(window_size, sigma_r, slice_m)));
      },
      py::arg("frame1"), py::arg("frame2"), py::arg("x"), py::arg("y"), py::arg("window_size") = 32,
      py::arg("sigma_r") = py::none(), py::arg("slice_m") = py::none());

  m.def(
      "dense_flow",
      [](const Array& f1, const Array& f2, const std::string& method, int window_size, int threads) {
        const Image a = to_image(f1);
        const Image b = to_image(f2);
        DenseResult r;
        {
          py::gil_scoped_release release;
          r = dense_estimate(a, b, window_size, parse_dense_method(method), BilateralParams::defaults_for(window_size),
                             threads);
        }
        return from_flow(r.flow);
      },
      py::arg("frame1"), py::arg("frame2"), py::arg("method") = "auto", py::arg("window_size") = 32,
      py::arg("threads") = 1, "One window per pixel, wrap padding.");

  m.def(
      "estimate_flow",
      [](const Array& f1, const Array& f2, const std::string& method, int threads) {
        const Image a = to_image(f1);
        const Image b = to_image(f2);
        FrameworkConfig cfg;
        cfg.threads = threads;
        const DenseMethod dm = parse_dense_method(method);
        cfg.trigger.mode = dm == DenseMethod::PC     ? TriggerPolicy::Mode::Never
                           : dm == DenseMethod::BLPC ? TriggerPolicy::Mode::Always
                                                     : TriggerPolicy::Mode::Auto;
        FlowField f;
        {
          py::gil_scoped_release release;
          f = estimate_flow(a, b, cfg);
        }
        return from_flow(f);
      },
      py::arg("frame1"), py::arg("frame2"), py::arg("method") = "auto", py::arg("threads") = 1,
      "Coarse-to-fine sparse-to-dense pipeline with default thresholds.");

  m.def(
      "bilateral_filter",
      [](const Array& img, std::vector<double> anchors, double sigma_s, double sigma_r) {
        return from_image(bilateral_filter_with_anchors(to_image(img), anchors, sigma_s, sigma_r));
      },
      py::arg("image"), py::arg("anchors"), py::arg("sigma_s"), py::arg("sigma_r"));

  m.def(
      "motion_compensate",
      [](const Array& f2, const Array& flow) { return from_image(motion_compensate(to_image(f2), to_flow(flow))); },
      py::arg("frame2"), py::arg("flow"));
  m.def(
      "angular_error", [](const Array& f, const Array& gt) { return angular_error(to_flow(f), to_flow(gt)).mean; },
      py::arg("flow"), py::arg("gt"), "Mean angular error in degrees over valid ground truth pixels.");
  m.def(
      "endpoint_error", [](const Array& f, const Array& gt) { return endpoint_error(to_flow(f), to_flow(gt)).mean; },
      py::arg("flow"), py::arg("gt"));
  m.def(
      "mse", [](const Array& c, const Array& t) { return mse(to_image(c), to_image(t)); }, py::arg("compensated"),
      py::arg("truth"));
  m.def(
      "psnr",
      [](const Array& c, const Array& t) {
        const Psnr p = psnr(to_image(c), to_image(t));
        return p.exact ? std::numeric_limits<double>::infinity() : p.db;
      },
      py::arg("compensated"), py::arg("truth"));
  m.def(
      "nrms", [](const Array& c, const Array& t, double eps) { return nrms(to_image(c), to_image(t), eps); },
      py::arg("compensated"), py::arg("truth"), py::arg("epsilon") = kNrmsEpsilon);

  m.def(
      "flow_to_color",
      [](const Array& flow, std::optional<double> max_magnitude) {
        const RgbImage rgb = flow_to_color(to_flow(flow), max_magnitude);
        py::array_t<unsigned char> out({rgb.height, rgb.width, 3});
        std::copy(rgb.data.begin(), rgb.data.end(), out.mutable_data());
        return out;
      },
      py::arg("flow"), py::arg("max_magnitude") = py::none());

  m.def(
      "read_flo", [](const std::filesystem::path& p) { return from_flow(read_flo(p)); }, py::arg("path"));
  m.def(
      "write_flo", [](const Array& flow, const std::filesystem::path& p) { write_flo(to_flow(flow), p); },
      py::arg("flow"), py::arg("path"));
  m.def(
      "read_image", [](const std::filesystem::path& p) { return from_image(read_image(p)); }, py::arg("path"));
  m.def(
      "write_image", [](const Array& img, const std::filesystem::path& p) { write_image(to_image(img), p); },
      py::arg("image"), py::arg("path"));

  m.def(
      "standard_suite",
      [](std::uint64_t seed) {
        py::list out;
        for (const ScenePair& s : standard_suite(seed)) {
          py::dict d;
          d["name"] = s.name;
          d["frame1"] = from_image(s.frame1);
          d["frame2"] = from_image(s.frame2);
          d["gt"] = from_flow(s.gt);
          out.append(d);
        }
        return out;
      },
      py::arg("seed") = 7);
  m.def(
      "fourier_shift",
      [](const Array& img, double dx, double dy) { return from_image(fourier_shift(to_image(img), {dx, dy})); },
      py::arg("image"), py::arg("dx"), py::arg("dy"), "Periodic subpixel translation: out(m) = in(m - d).");
  m.def(
      "value_noise",
      [](int width, int height, std::uint64_t seed) { return from_image(value_noise_texture({}, width, height, seed)); },
      py::arg("width"), py::arg("height"), py::arg("seed"));
}
