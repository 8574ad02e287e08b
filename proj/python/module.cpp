#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "memlane/harness.hpp"
#include "memlane/oracle.hpp"

namespace py = pybind11;
using namespace memlane;

namespace {

KernelDescriptor descriptor_by_name(const std::string& kernel, std::size_t n,
                                    const std::string& lbm_layout, std::size_t lbm_element_size,
                                    std::size_t pad_dim1) {
  switch (parse_kernel(kernel)) {
    case KernelKind::Copy: return stream_descriptor(StreamKernel::Copy, n);
    case KernelKind::Scale: return stream_descriptor(StreamKernel::Scale, n);
    case KernelKind::Add: return stream_descriptor(StreamKernel::Add, n);
    case KernelKind::Triad: return stream_descriptor(StreamKernel::Triad, n);
    case KernelKind::VTriad: return stream_descriptor(StreamKernel::VectorTriad, n);
    case KernelKind::Jacobi2D: return jacobi_descriptor(n);
    case KernelKind::Lbm:
      return lbm_descriptor(n, parse_lbm_layout(lbm_layout), lbm_element_size, pad_dim1);
  }
  throw std::invalid_argument("unknown kernel");
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Segmented array layouts, controller-aliasing analysis and bandwidth kernels";

  m.def("partition", &partition, py::arg("n"), py::arg("parts"),
        "Balanced segment lengths: the first n % parts get one extra element");
  m.def("align_up", &align_up, py::arg("x"), py::arg("alignment"));

  py::class_<LayoutParams>(m, "LayoutParams")
      .def(py::init([](std::size_t element_size, std::size_t base_alignment,
                       std::size_t segment_alignment, std::size_t shift, std::size_t offset) {
             LayoutParams p{element_size, base_alignment, segment_alignment, shift, offset};
             p.validate();
             return p;
           }),
           py::arg("element_size") = 8, py::arg("base_alignment") = 8192,
           py::arg("segment_alignment") = 0, py::arg("shift") = 0, py::arg("offset") = 0)
      .def_readwrite("element_size", &LayoutParams::element_size)
      .def_readwrite("base_alignment", &LayoutParams::base_alignment)
      .def_readwrite("segment_alignment", &LayoutParams::segment_alignment)
      .def_readwrite("shift", &LayoutParams::shift)
      .def_readwrite("offset", &LayoutParams::offset);

  py::class_<LayoutPlan>(m, "LayoutPlan")
      .def_readonly("element_size", &LayoutPlan::element_size)
      .def_readonly("segment_byte_offsets", &LayoutPlan::segment_byte_offsets)
      .def_readonly("segment_lengths", &LayoutPlan::segment_lengths)
      .def_readonly("total_bytes", &LayoutPlan::total_bytes)
      .def("logical_length", &LayoutPlan::logical_length);

  m.def(
      "build_layout",
      [](const LayoutParams& p, const std::vector<std::size_t>& lengths) {
        return build_layout(p, lengths);
      },
      py::arg("params"), py::arg("lengths"));

  py::class_<AddressMapModel>(m, "AddressMapModel")
      .def(py::init([](std::vector<unsigned> controller_bits, unsigned bank_bit,
                       std::size_t line_size) {
             AddressMapModel model{std::move(controller_bits), bank_bit, line_size};
             model.validate();
             return model;
           }),
           py::arg("controller_bits") = std::vector<unsigned>{8, 7}, py::arg("bank_bit") = 6,
           py::arg("line_size") = 64)
      .def_readonly("controller_bits", &AddressMapModel::controller_bits)
      .def_readonly("bank_bit", &AddressMapModel::bank_bit)
      .def_readonly("line_size", &AddressMapModel::line_size)
      .def("controller_count", &AddressMapModel::controller_count)
      .def("controller_of", &AddressMapModel::controller_of, py::arg("address"))
      .def("bank_of", &AddressMapModel::bank_of, py::arg("address"))
      .def("line_of", &AddressMapModel::line_of, py::arg("address"));

  py::class_<KernelDescriptor>(m, "KernelDescriptor")
      .def_readonly("name", &KernelDescriptor::name)
      .def_readonly("flops_per_iteration", &KernelDescriptor::flops_per_iteration)
      .def_readonly("element_size", &KernelDescriptor::element_size)
      .def("read_stream_count", &KernelDescriptor::read_stream_count)
      .def("write_stream_count", &KernelDescriptor::write_stream_count)
      .def("bytes_per_iteration", &KernelDescriptor::bytes_per_iteration)
      .def("iteration_count", &KernelDescriptor::iteration_count);

  m.def("descriptor", &descriptor_by_name, py::arg("kernel"), py::arg("n"),
        py::arg("lbm_layout") = "ijkv", py::arg("lbm_element_size") = 8, py::arg("pad_dim1") = 0,
        "Read/write stream structure of a kernel");

  py::class_<TrafficModel>(m, "TrafficModel")
      .def_readonly("bytes_total", &TrafficModel::bytes_total)
      .def_readonly("bytes_memory", &TrafficModel::bytes_memory)
      .def_readonly("bytes_memory_rfo", &TrafficModel::bytes_memory_rfo)
      .def_readonly("flops", &TrafficModel::flops)
      .def_readonly("balance_total", &TrafficModel::balance_total)
      .def_readonly("balance_memory", &TrafficModel::balance_memory)
      .def_readonly("balance_memory_rfo", &TrafficModel::balance_memory_rfo)
      .def_readonly("rfo_ratio", &TrafficModel::rfo_ratio);

  m.def("traffic_model", &traffic_model, py::arg("descriptor"));

  m.def(
      "predicted_performance",
      [](const KernelDescriptor& d, double bandwidth) {
        PredictedRate r = predicted_performance(d, bandwidth);
        return py::make_tuple(r.value, r.unit == RateUnit::MLUPs ? "MLUPs" : "GB/s");
      },
      py::arg("descriptor"), py::arg("bandwidth_bytes_per_s"),
      "-> (value, unit): MLUPs for grid kernels, reported GB/s for streams");

  py::class_<BalanceScore>(m, "BalanceScore")
      .def_readonly("distinct_sum", &BalanceScore::distinct_sum)
      .def_readonly("group_count", &BalanceScore::group_count)
      .def_readonly("controller_count", &BalanceScore::controller_count)
      .def_readonly("histogram", &BalanceScore::histogram)
      .def("mean_distinct_controllers_per_step",
           &BalanceScore::mean_distinct_controllers_per_step)
      .def("normalized", &BalanceScore::normalized)
      .def("histogram_evenness", &BalanceScore::histogram_evenness);

  py::class_<BenchConfig>(m, "BenchConfig")
      .def(py::init<>())
      .def_readwrite("kernel", &BenchConfig::kernel)
      .def_readwrite("n", &BenchConfig::n)
      .def_readwrite("threads", &BenchConfig::threads)
      .def_property(
          "schedule", [](const BenchConfig& c) { return c.schedule.to_string(); },
          [](BenchConfig& c, const std::string& s) { c.schedule = Schedule::parse(s); })
      .def_property(
          "mode", [](const BenchConfig& c) { return std::string(to_string(c.mode)); },
          [](BenchConfig& c, const std::string& s) { c.mode = parse_mode(s); })
      .def_readwrite("base_align", &BenchConfig::base_align)
      .def_readwrite("seg_align", &BenchConfig::seg_align)
      .def_readwrite("shift", &BenchConfig::shift)
      .def_readwrite("offsets", &BenchConfig::offsets)
      .def_readwrite("segments", &BenchConfig::segments)
      .def_readwrite("common_block", &BenchConfig::common_block)
      .def_property(
          "lbm_layout", [](const BenchConfig& c) { return std::string(to_string(c.lbm_layout)); },
          [](BenchConfig& c, const std::string& s) { c.lbm_layout = parse_lbm_layout(s); })
      .def_readwrite("pad_dim1", &BenchConfig::pad_dim1)
      .def_readwrite("coalesce", &BenchConfig::coalesce)
      .def_readwrite("lbm_element_size", &BenchConfig::lbm_element_size)
      .def_readwrite("reps", &BenchConfig::reps)
      .def_readwrite("scalar", &BenchConfig::scalar)
      .def_readwrite("bandwidth", &BenchConfig::bandwidth)
      .def_readwrite("trace_steps", &BenchConfig::trace_steps)
      .def_readwrite("model", &BenchConfig::model);

  py::class_<BenchRecord>(m, "BenchRecord")
      .def_readonly("time_best_s", &BenchRecord::time_best_s)
      .def_readonly("time_median_s", &BenchRecord::time_median_s)
      .def_readonly("gbs_reported", &BenchRecord::gbs_reported)
      .def_readonly("gbs_actual", &BenchRecord::gbs_actual)
      .def_readonly("mlups", &BenchRecord::mlups)
      .def_readonly("balance", &BenchRecord::balance)
      .def("balance_score", &BenchRecord::balance_score);

  py::class_<SweepSeries>(m, "SweepSeries")
      .def_readonly("variable", &SweepSeries::variable)
      .def_readonly("values", &SweepSeries::values)
      .def_readonly("records", &SweepSeries::records);

  m.def(
      "run", [](const BenchConfig& c) { return run(c); }, py::arg("config"));
  m.def(
      "sweep",
      [](const BenchConfig& c, const std::string& variable, const std::vector<std::size_t>& values,
         const std::string& csv_path) {
        return sweep(c, parse_sweep_variable(variable), values, csv_path);
      },
      py::arg("config"), py::arg("variable"), py::arg("values"), py::arg("csv_path") = "");
  m.def("to_csv", &to_csv, py::arg("series"));

  m.def(
      "detect_period_bytes",
      [](const BenchConfig& c, const std::vector<std::size_t>& offsets) -> py::object {
        auto period = detect_period(analysis_score_sweep(c, offsets));
        if (!period) return py::none();
        return py::cast(*period);
      },
      py::arg("config"), py::arg("offsets"),
      "Smallest byte period of the balance score over an analyze offset sweep");

  py::class_<RecipeReport>(m, "RecipeReport")
      .def_readonly("name", &RecipeReport::name)
      .def_readonly("pass_", &RecipeReport::pass)
      .def_readonly("details", &RecipeReport::details)
      .def("__bool__", [](const RecipeReport& r) { return r.pass; });

  m.def("recipe_check", &recipe_check, py::arg("name"));

  m.def("thrashing_candidate", &thrashing_candidate, py::arg("config"),
        "True when the lattice first dimension is a multiple of 64 elements");
}
