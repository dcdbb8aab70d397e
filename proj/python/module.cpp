#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <cstring>
#include <optional>
#include <span>
#include <string>

#include "longdiff/attention.hpp"
#include "longdiff/config.hpp"
#include "longdiff/error.hpp"
#include "longdiff/keyframe.hpp"
#include "longdiff/pipeline.hpp"
#include "longdiff/position_mapping.hpp"
#include "longdiff/tensor_io.hpp"
#include "longdiff/theory.hpp"

namespace py = pybind11;
using namespace longdiff;

namespace {

using DoubleArray = py::array_t<double, py::array::c_style | py::array::forcecast>;

Tensor to_tensor(const DoubleArray& a) {
    std::vector<std::size_t> dims(a.shape(), a.shape() + a.ndim());
    std::vector<double> data(a.data(), a.data() + a.size());
    return Tensor(std::move(dims), std::move(data));
}

py::array_t<double> to_array(const Tensor& t) {
    py::array_t<double> out(std::vector<py::ssize_t>(t.dims.begin(), t.dims.end()));
    if (t.size()) std::memcpy(out.mutable_data(), t.data.data(), t.size() * sizeof(double));
    return out;
}

Matrix to_matrix(const DoubleArray& a) {
    if (a.ndim() != 2) throw py::value_error("expected a 2-D array");
    return Matrix::from_tensor(to_tensor(a));
}

py::array_t<double> to_array(const Matrix& m) { return to_array(m.to_tensor()); }

py::array_t<std::int64_t> to_array(const PositionMatrix& m) {
    const auto n = static_cast<py::ssize_t>(m.size());
    py::array_t<std::int64_t> out({n, n});
    if (n) std::memcpy(out.mutable_data(), m.entries().data(), m.entries().size() * sizeof(std::int64_t));
    return out;
}

py::array_t<bool> to_array(const AttentionMask& m) {
    const auto n = static_cast<py::ssize_t>(m.size());
    py::array_t<bool> out({n, n});
    auto r = out.mutable_unchecked<2>();
    for (py::ssize_t i = 0; i < n; ++i)
        for (py::ssize_t j = 0; j < n; ++j) r(i, j) = m(i, j);
    return out;
}

AttentionMask to_mask(const py::object& obj, std::size_t n) {
    auto a = py::array_t<bool, py::array::c_style | py::array::forcecast>::ensure(obj);
    if (!a || a.ndim() != 2 || a.shape(0) != static_cast<py::ssize_t>(n) || a.shape(1) != static_cast<py::ssize_t>(n))
        throw py::value_error("mask must be an N x N boolean array");
    AttentionMask mask(n);
    auto r = a.unchecked<2>();
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) mask.set(i, j, r(i, j));
    return mask;
}

// Python dicts travel through the JSON schema the CLI uses.
json to_json_value(const py::handle& obj) {
    const auto dumps = py::module_::import("json").attr("dumps");
    return json::parse(dumps(obj).cast<std::string>());
}

py::object from_json_value(const json& j) {
    return py::module_::import("json").attr("loads")(j.dump());
}

RPEKind rpe_arg(const py::object& obj) {
    if (obj.is_none()) return Rotary{};
    return rpe_from_json(to_json_value(obj));
}

py::dict attention_dict(const AttentionResult& r) {
    py::dict d;
    d["averaged_attention"] = to_array(r.averaged_attention);
    py::list shifts;
    for (const auto& a : r.per_shift_attention) shifts.append(to_array(a));
    d["per_shift_attention"] = shifts;
    d["output"] = to_array(r.output);
    return d;
}

}  // namespace

PYBIND11_MODULE(_longdiff, m) {
    m.doc() = "Grouped/shifted temporal attention and key-frame masking for long videos";

    py::register_exception_translator([](std::exception_ptr p) {
        try {
            if (p) std::rethrow_exception(p);
        } catch (const Error& e) {
            if (e.is_io()) {
                PyErr_SetString(PyExc_OSError, e.what());
            } else {
                PyErr_SetString(PyExc_ValueError, e.what());
            }
        }
    });

    m.def("read_tensor", [](const std::string& path) { return to_array(read_tensor(path)); }, py::arg("path"));
    m.def("write_tensor", [](const DoubleArray& a, const std::string& path) { write_tensor(to_tensor(a), path); },
          py::arg("array"), py::arg("path"));
    m.def("synth_features", [](std::size_t n, std::size_t c, std::size_t hw, std::uint64_t seed) {
        return to_array(synth_features(n, c, hw, seed));
    }, py::arg("frames"), py::arg("channels"), py::arg("spatial"), py::arg("seed") = 0);

    m.def("group_config", [](std::size_t n, std::size_t g) {
        const auto cfg = group_config(n, g);
        return py::dict(py::arg("N") = cfg.frames, py::arg("G") = cfg.groups,
                        py::arg("S") = cfg.group_size, py::arg("M") = cfg.shifts);
    }, py::arg("frames"), py::arg("groups"));
    m.def("schedule", [](std::size_t n, std::size_t g) {
        py::list out;
        for (const auto& mat : schedule(group_config(n, g)).matrices) out.append(to_array(mat));
        return out;
    }, py::arg("frames"), py::arg("groups"), "Position matrices G(0)..G(M) as int64 arrays.");

    m.def("logit", [](const DoubleArray& q, const DoubleArray& k, double p, const py::object& rpe) {
        if (q.ndim() != 1 || k.ndim() != 1) throw py::value_error("q and k must be 1-D");
        return logit(rpe_arg(rpe), std::span<const double>(q.data(), q.size()),
                     std::span<const double>(k.data(), k.size()), p);
    }, py::arg("q"), py::arg("k"), py::arg("p"), py::arg("rpe") = py::none());

    m.def("longdiff_attention",
          [](const DoubleArray& q, const DoubleArray& k, const DoubleArray& v, std::size_t groups,
             const py::object& mask, const py::object& rpe, const std::string& mask_mode, bool per_shift) {
              const Matrix qm = to_matrix(q), km = to_matrix(k), vm = to_matrix(v);
              const auto sched = schedule(group_config(qm.rows(), groups));
              std::optional<AttentionMask> am;
              if (!mask.is_none()) am = to_mask(mask, qm.rows());
              const RPEKind kind = rpe_arg(rpe);
              const MaskMode mode = parse_mask_mode(mask_mode);
              AttentionResult r;
              {
                  py::gil_scoped_release release;
                  r = longdiff_attention(qm, km, vm, sched, am ? &*am : nullptr, kind, {mode, per_shift});
              }
              return attention_dict(r);
          },
          py::arg("q"), py::arg("k"), py::arg("v"), py::arg("groups"), py::arg("mask") = py::none(),
          py::arg("rpe") = py::none(), py::arg("mask_mode") = "renormalize", py::arg("per_shift") = false);

    m.def("vanilla_attention",
          [](const DoubleArray& q, const DoubleArray& k, const DoubleArray& v, const py::object& mask,
             const py::object& rpe, const std::string& mask_mode) {
              const Matrix qm = to_matrix(q);
              std::optional<AttentionMask> am;
              if (!mask.is_none()) am = to_mask(mask, qm.rows());
              const auto r = vanilla_attention(qm, to_matrix(k), to_matrix(v), am ? &*am : nullptr,
                                               rpe_arg(rpe), parse_mask_mode(mask_mode));
              return py::make_tuple(to_array(r.weights), to_array(r.output));
          },
          py::arg("q"), py::arg("k"), py::arg("v"), py::arg("mask") = py::none(), py::arg("rpe") = py::none(),
          py::arg("mask_mode") = "renormalize");

    m.def("pseudo_video", [](const DoubleArray& features) {
        const auto video = make_pseudo_video(to_tensor(features));
        py::array_t<std::uint8_t> out({static_cast<py::ssize_t>(video.frames()), py::ssize_t{3},
                                       static_cast<py::ssize_t>(video.spatial())});
        std::memcpy(out.mutable_data(), video.values().data(), video.values().size());
        return out;
    }, py::arg("features"));
    m.def("detect_keyframes", [](const DoubleArray& features, std::size_t shots, double alpha,
                                 const std::string& sad_mode) {
        return detect_keyframes(make_pseudo_video(to_tensor(features)), shots, alpha, parse_sad_mode(sad_mode));
    }, py::arg("features"), py::arg("shots"), py::arg("alpha") = 2.0, py::arg("sad_mode") = "mean");
    m.def("build_ifs_mask", [](std::size_t n, std::size_t l, const std::vector<std::size_t>& keys) {
        return to_array(build_ifs_mask(n, l, keys).allowed);
    }, py::arg("frames"), py::arg("neighbor_range"), py::arg("key_frames"));

    m.def("theorem1_check", [](double sup_logit, std::size_t g, std::size_t r, double epsilon) {
        const auto rep = theorem1_check(sup_logit, g, r, epsilon);
        return py::dict(py::arg("sup_logit") = rep.sup_logit, py::arg("epsilon_uni") = rep.epsilon_uni,
                        py::arg("r") = rep.r, py::arg("g") = rep.g, py::arg("rhs") = rep.rhs,
                        py::arg("satisfied") = rep.satisfied);
    }, py::arg("sup_logit"), py::arg("g"), py::arg("r"), py::arg("epsilon"));
    m.def("synthetic_survey", [](std::size_t heads, std::size_t samples, std::uint64_t seed, std::size_t n) {
        return head_survey(synthetic_head_suite(heads, samples, seed), n).fraction_satisfied;
    }, py::arg("heads"), py::arg("samples"), py::arg("seed"), py::arg("frames"),
       "Fraction of synthetic rotary heads meeting the distinguishability bound.");
    m.def("entropy_check", [](const DoubleArray& logits) {
        if (logits.ndim() != 1) throw py::value_error("logits must be 1-D");
        const auto rep = entropy_check(std::span<const double>(logits.data(), logits.size()));
        return py::dict(py::arg("entropy") = rep.entropy, py::arg("bound") = rep.bound,
                        py::arg("B") = rep.B, py::arg("holds") = rep.holds);
    }, py::arg("logits"));

    m.def("plan_layers", [](std::size_t total, double fraction) {
        return plan_layers(total, fraction).longdiff_layers;
    }, py::arg("total"), py::arg("replace_fraction"));
    m.def("run_pipeline",
          [](const py::dict& config, const DoubleArray& features, std::size_t layers, const std::string& mask_mode) {
              const RunConfig cfg = run_config_from_json(to_json_value(config));
              const Tensor f = to_tensor(features);
              PipelineOptions opts;
              opts.layers = layers;
              opts.mask_mode = parse_mask_mode(mask_mode);
              PipelineResult result;
              {
                  py::gil_scoped_release release;
                  result = run_pipeline(cfg, f, opts);
              }
              return py::make_tuple(to_array(result.output), from_json_value(to_json(result.report)));
          },
          py::arg("config"), py::arg("features"), py::arg("layers") = 16, py::arg("mask_mode") = "renormalize");
    m.def("default_config", [] { return from_json_value(to_json(RunConfig{})); });
}
