#include "crw/io.hpp"

#include <array>
#include <charconv>
#include <string>
#include <type_traits>

#include "crw/errors.hpp"

namespace crw {
namespace {

using ojson = nlohmann::ordered_json;

template <class T>
T field(const ojson& j, const char* name) {
  if (!j.contains(name)) {
    throw DomainError(std::string("schedule: missing field \"") + name + "\"");
  }
  try {
    return j.at(name).get<T>();
  } catch (const nlohmann::json::exception&) {
    throw DomainError(std::string("schedule: field \"") + name + "\" has the wrong type");
  }
}

double prefix(const ojson& j) { return j.contains("prefix_p") ? field<double>(j, "prefix_p") : 1.0; }

/// Shortest decimal that round-trips.
void put_real(std::ostream& os, double x) {
  std::array<char, 32> buf{};
  const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), x);
  os.write(buf.data(), res.ptr - buf.data());
}

}  // namespace

Schedule schedule_from_json(const ojson& j) {
  if (!j.is_object()) throw DomainError("schedule: expected a JSON object");
  const auto kind = field<std::string>(j, "kind");
  if (kind == "Constant") return Schedule::constant(field<double>(j, "p"));
  if (kind == "Critical") {
    return Schedule::critical(field<double>(j, "a"), field<std::int64_t>(j, "n0"), prefix(j));
  }
  if (kind == "PowerDecay") {
    return Schedule::power_decay(field<double>(j, "c"), field<double>(j, "gamma"),
                                 field<std::int64_t>(j, "n0"), prefix(j));
  }
  if (kind == "Periodic") {
    return Schedule::periodic(field<std::vector<double>>(j, "values"),
                              field<std::int64_t>(j, "n0"), prefix(j));
  }
  if (kind == "Explicit") return Schedule::explicit_values(field<std::vector<double>>(j, "values"));
  throw DomainError("schedule: unknown kind \"" + kind + "\"");
}

ojson schedule_to_json(const Schedule& schedule) {
  ojson out;
  std::visit(
      [&](const auto& k) {
        using K = std::decay_t<decltype(k)>;
        out["kind"] = schedule.kind_name();
        if constexpr (std::is_same_v<K, Constant>) {
          out["p"] = k.p;
        } else if constexpr (std::is_same_v<K, Critical>) {
          out["a"] = k.a;
          out["n0"] = k.n0;
          out["prefix_p"] = schedule.prefix_p();
        } else if constexpr (std::is_same_v<K, PowerDecay>) {
          out["c"] = k.c;
          out["gamma"] = k.gamma;
          out["n0"] = k.n0;
          out["prefix_p"] = schedule.prefix_p();
        } else if constexpr (std::is_same_v<K, Periodic>) {
          out["values"] = k.values;
          out["n0"] = k.n0;
          out["prefix_p"] = schedule.prefix_p();
        } else {
          out["values"] = k.values;
        }
      },
      schedule.kind());
  return out;
}

ojson to_json(const RegimeClassification& c) {
  ojson conditions = ojson::array();
  for (const auto& cc : c.checked_conditions) {
    conditions.push_back({{"name", cc.name}, {"satisfied", cc.satisfied}});
  }
  return {{"regime", to_string(c.regime)},
          {"theorem_ref", c.theorem_ref},
          {"checked_conditions", conditions}};
}

void write_path_csv(std::ostream& os, const Path& path) {
  os << "k,tau_k,axis,sign\n";
  for (std::size_t k = 0; k < path.events.size(); ++k) {
    const TurnEvent& e = path.events[k];
    os << k + 1 << ',' << e.update_time << ',' << e.new_direction.axis << ','
       << e.new_direction.sign << '\n';
  }
}

void write_dense_csv(std::ostream& os, const Path& path) {
  os << 'n';
  for (int j = 1; j <= path.dimension; ++j) os << ",x_" << j;
  os << '\n';
  const std::vector<Point> positions = replay(path);
  for (std::size_t n = 0; n < positions.size(); ++n) {
    os << n;
    for (auto x : positions[n]) os << ',' << x;
    os << '\n';
  }
}

void write_zigzag_csv(std::ostream& os, const ZigzagPath& path) {
  os << "left,right,axis,sign\n";
  const LabeledIntervals& iv = path.intervals();
  for (std::size_t k = 0; k < iv.size(); ++k) {
    put_real(os, iv.left(k));
    os << ',';
    put_real(os, iv.right(k));
    os << ',' << iv.labels[k].axis << ',' << iv.labels[k].sign << '\n';
  }
}

void write_trajectory_csv(std::ostream& os, const ZigzagPath& path,
                          const std::vector<double>& grid) {
  os << 't';
  for (int j = 1; j <= path.dimension(); ++j) os << ",z_" << j;
  os << '\n';
  for (double t : grid) {
    const std::vector<double> z = path.position_at(t);
    put_real(os, t);
    for (double x : z) {
      os << ',';
      put_real(os, x);
    }
    os << '\n';
  }
}

void write_distribution_csv(std::ostream& os, const ExactDistribution& dist) {
  for (int j = 1; j <= dist.dimension(); ++j) os << "x_" << j << ',';
  os << "axis,sign,prob\n";
  for (const auto& e : dist.entries()) {
    for (auto x : e.position) os << x << ',';
    os << e.direction.axis << ',' << e.direction.sign << ',';
    put_real(os, e.probability);
    os << '\n';
  }
}

}  // namespace crw
