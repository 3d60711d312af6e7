#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "orthantloop/oracle.hpp"
#include "orthantloop/tensor.hpp"

namespace oloop {

enum class Command { compute, validate, expand, tensor, oracle };
enum class OutputFormat { text, csv, jsonlines };

Command parse_command(const std::string& name);
OutputFormat parse_format(const std::string& name);

struct RunRequest {
    Command command = Command::compute;
    std::string config_path;               // empty: validate runs its built-in set
    std::vector<std::string> overrides;    // key=value, keys must exist in the file
    OutputFormat output_format = OutputFormat::text;
    QuadratureSettings quad;
    MCSettings mc;
    std::optional<int> order;              // eps order, overrides epsilon_order
};

struct ParsedConfig {
    KinematicConfig config;
    std::optional<std::vector<Vec4>> momenta;
    Vec4 metric = kMinkowski;
    std::vector<std::string> warnings;
};

// Sectioned text format:
//   [legs]        mass_i = <float>
//   [invariants]  k2_i_j = <float>   (one triangle is enough)
//   [powers]      nu_i = <int>       (default 1)
//   [dimension]   n = <float>  or  d = <int> with epsilon_order = <int>
//   [momenta]     p_i = <E> <px> <py> <pz>, metric = minkowski | euclidean
// '#' starts a comment. Errors name the line; overrides replace existing keys.
ParsedConfig parse_config(const std::string& path, const std::vector<std::string>& overrides = {});
ParsedConfig parse_config_text(const std::string& text, const std::string& source,
                               const std::vector<std::string>& overrides = {});

// 2 parse/validation, 3 numeric, 4 divergent.
int exit_code_for(ErrorKind kind);

// Executes the request, writes records to out and diagnostics to err.
// Returns the process exit code: 0 on success, 1 when a validation check fails.
int run(const RunRequest& request, std::ostream& out, std::ostream& err);

}  // namespace oloop
