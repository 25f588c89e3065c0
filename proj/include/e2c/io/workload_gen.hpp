#pragma once

#include <e2c/core/model.hpp>

#include <cstdint>
#include <string>
#include <variant>
#include <vector>

namespace e2c::io {

struct ConstantArrivals {
    Duration period;
};
struct UniformArrivals {
    double lo_s = 0.0;
    double hi_s = 0.0;
};
struct ExponentialArrivals {
    double rate_per_s = 1.0;
};
using ArrivalProcess = std::variant<ConstantArrivals, UniformArrivals, ExponentialArrivals>;

struct TypeArrivals {
    std::string type_name;
    ArrivalProcess process;
};

struct WorkloadGenSpec {
    std::vector<TypeArrivals> types;
    Duration horizon;
    double beta = 1.5;
    std::uint64_t seed = 0;
};

/// Parses `T1:exp:0.5`, `T2:const:2`, `T3:uniform:1:3`.
TypeArrivals parse_type_arrivals(const std::string& text);

/// Reads `{"horizon":100,"beta":1.5,"seed":7,"types":[{"type":"T1","process":"exp","rate":0.5},...]}`.
WorkloadGenSpec parse_gen_spec_json(const std::string& text);

/// Per type: successive gaps from t=0 until the next arrival passes the
/// horizon; deadline = arrival + beta * mean finite EET of the type. Output
/// sorted by (arrival, type order) with dense ids. Throws ConfigError for
/// types absent from the EET or invalid parameters.
std::vector<Task> generate_workload(const WorkloadGenSpec& spec, const EetMatrix& eet);

} // namespace e2c::io
