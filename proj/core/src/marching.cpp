#include "charwave/marching.hpp"

#include <algorithm>
#include <cstring>

#include <fmt/format.h>

#include "charwave/errors.hpp"
#include "charwave/operators.hpp"
#include "charwave/time_stepping.hpp"

namespace charwave {

bool DiagonalRecord::complete() const {
  return !station_filled.empty() &&
         std::all_of(station_filled.begin(), station_filled.end(), [](bool b) { return b; });
}

std::size_t EvolutionRecord::index_of(const std::string& name) const {
  const auto it = std::find(names.begin(), names.end(), name);
  if (it == names.end()) throw UsageError(fmt::format("record has no variable named '{}'", name));
  return static_cast<std::size_t>(it - names.begin());
}

namespace {

void copy_plane(const FieldSlice& src, std::size_t src_index, FieldSlice& dst, std::size_t dst_index) {
  const Shape a = src.shape();
  const std::size_t m = a[1] * a[2];
  std::memcpy(dst.values().data() + dst_index * m, src.values().data() + src_index * m, m * sizeof(double));
}

State make_state(std::size_t count, const Axes& axes) { return State(count, FieldSlice(axes)); }

}  // namespace

EvolutionRecord march(const CharSystem& system, const MarchOptions& options) {
  const GridSpec& g = system.grid();
  g.validate();
  if (!g.characteristic()) throw UsageError("march() needs a characteristic grid");

  EvolutionRecord rec;
  rec.grid = g;
  const auto normal_names = system.normal_names();
  const auto null_names = system.null_names();
  const auto aux_names = system.auxiliary_names();
  rec.normal_count = normal_names.size();
  rec.null_count = null_names.size();
  rec.names = normal_names;
  rec.names.insert(rec.names.end(), null_names.begin(), null_names.end());
  rec.names.insert(rec.names.end(), aux_names.begin(), aux_names.end());
  rec.forms = system.energy_forms();
  if (rec.forms.b_u.size() != rec.normal_count + rec.null_count ||
      rec.forms.b_perp.size() != rec.normal_count + rec.null_count)
    throw UsageError("energy forms do not match the variable count");

  State normal = system.initial_normal();
  if (normal.size() != rec.normal_count) throw UsageError("initial_normal returned the wrong number of fields");
  const Axes axes = g.axes;
  for (auto& f : normal) {
    if (f.axes() != axes) throw UsageError("initial normal data does not match the grid");
    f.set_axis_value(0.0);
  }
  State null = make_state(rec.null_count, axes);
  State null_stage = make_state(rec.null_count, axes);
  State aux = make_state(aux_names.size(), axes);

  const std::size_t n_steps = g.steps;
  const std::size_t stride = g.stride();
  const std::size_t stations = axes[0].points();
  const double du = g.step();
  const std::size_t vars = rec.names.size();

  rec.diagonal.names = rec.names;
  rec.diagonal.fields = make_state(vars, axes);
  rec.diagonal.station_filled.assign(stations, false);
  const Axes face_axes{g.marching_axis(), axes[1], axes[2]};
  rec.face = make_state(vars, face_axes);

  std::vector<bool> want(n_steps + 1, options.all_snapshots);
  for (std::size_t s : options.snapshot_steps) {
    if (s > n_steps) throw UsageError(fmt::format("snapshot step {} beyond final step {}", s, n_steps));
    want[s] = true;
  }

  const bool source = system.has_volume_source();
  FieldSlice density(axes);
  if (source) rec.volume.assign(n_steps + 1, std::vector<double>(stations, 0.0));

  auto field_at = [&](std::size_t v) -> const FieldSlice& {
    if (v < rec.normal_count) return normal[v];
    if (v < rec.normal_count + rec.null_count) return null[v - rec.normal_count];
    return aux[v - rec.normal_count - rec.null_count];
  };

  auto observe = [&](std::size_t n) {
    const double u = static_cast<double>(n) * du;
    for (auto& f : null) f.set_axis_value(u);
    for (auto& f : aux) f.set_axis_value(u);
    if (n == 0) {
      rec.initial.clear();
      for (std::size_t v = 0; v < vars; ++v) rec.initial.push_back(field_at(v));
    }
    for (std::size_t v = 0; v < vars; ++v) copy_plane(field_at(v), 0, rec.face[v], n);
    if (n % stride == 0) {
      const std::size_t station = stations - 1 - n / stride;
      for (std::size_t v = 0; v < vars; ++v) copy_plane(field_at(v), station, rec.diagonal.fields[v], station);
      rec.diagonal.station_filled[station] = true;
    }
    if (source) {
      system.volume_density(normal, null, density);
      for (std::size_t i = 0; i < stations; ++i) rec.volume[n][i] = quadrature_plane(density, i, g.order);
    }
    if (want[n]) {
      State snap;
      for (std::size_t v = 0; v < vars; ++v) snap.push_back(field_at(v));
      rec.snapshots.emplace(n, std::move(snap));
    }
  };

  system.solve_null(0, normal, null);
  system.solve_auxiliary(0, normal, null, aux);
  for (const auto& f : null) f.check_finite("null variables at u = 0");
  observe(0);

  RkWorkspace ws;
  for (std::size_t n = 0; n < n_steps; ++n) {
    auto rhs = [&](int half, const State& y, State& dy) {
      const std::size_t h = 2 * n + static_cast<std::size_t>(half);
      if (half == 0) {
        system.normal_rhs(h, y, null, dy);
      } else {
        system.solve_null(h, y, null_stage);
        system.normal_rhs(h, y, null_stage, dy);
      }
    };
    rk_step(normal, du, g.order, rhs, ws);
    const double u = static_cast<double>(n + 1) * du;
    for (auto& f : normal) {
      f.set_axis_value(u);
      f.check_finite(fmt::format("normal variable after u-step {}", n + 1));
    }
    system.solve_null(2 * n + 2, normal, null);
    for (const auto& f : null) f.check_finite(fmt::format("null variable after u-step {}", n + 1));
    system.solve_auxiliary(2 * n + 2, normal, null, aux);
    observe(n + 1);
  }
  return rec;
}

FieldSlice snapshot_u_derivative(const EvolutionRecord& record, const std::string& name, std::size_t step) {
  const std::size_t v = record.index_of(name);
  const int order = record.grid.order;
  const std::size_t reach = order == 2 ? 1 : 2;
  if (step < reach || step + reach > record.grid.steps)
    throw UsageError(fmt::format("u-difference at step {} needs {} snapshots on each side", step, reach));
  auto snap = [&](std::size_t s) -> const FieldSlice& {
    const auto it = record.snapshots.find(s);
    if (it == record.snapshots.end()) throw UsageError(fmt::format("snapshot at step {} was not recorded", s));
    return it->second[v];
  };
  const double du = record.grid.step();
  FieldSlice out(record.grid.axes, static_cast<double>(step) * du);
  if (order == 2) {
    out.axpy(0.5 / du, snap(step + 1));
    out.axpy(-0.5 / du, snap(step - 1));
  } else {
    const double c = 1.0 / (12.0 * du);
    out.axpy(c, snap(step - 2));
    out.axpy(-8.0 * c, snap(step - 1));
    out.axpy(8.0 * c, snap(step + 1));
    out.axpy(-c, snap(step + 2));
  }
  return out;
}

}  // namespace charwave
