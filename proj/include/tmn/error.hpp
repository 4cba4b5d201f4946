#pragma once

#include <stdexcept>
#include <string>
#include <utility>

namespace tmn {

/// All library failures carry a short machine-parsable code plus a human message.
/// The CLI prints "error: <code>: <message>" and exits nonzero.
class TmnError : public std::runtime_error {
public:
	TmnError(std::string code, const std::string& message)
		: std::runtime_error(code + ": " + message), code_(std::move(code))
	{
	}

	const std::string& code() const noexcept { return code_; }

private:
	std::string code_;
};

namespace errc {
// tmn_graph
inline constexpr const char* duplicate_id = "DuplicateId";
inline constexpr const char* dangling_endpoint = "DanglingEndpoint";
inline constexpr const char* self_loop_arc = "SelfLoopArc";
inline constexpr const char* negative_weight = "NegativeWeight";
inline constexpr const char* unknown_vertex = "UnknownVertex";
inline constexpr const char* unknown_arc = "UnknownArc";
inline constexpr const char* cycle_budget_exceeded = "CycleBudgetExceeded";
inline constexpr const char* underdetermined = "Underdetermined";
inline constexpr const char* inconsistent = "Inconsistent";
// compartment models
inline constexpr const char* stock_underflow = "StockUnderflow";
inline constexpr const char* singular_b = "SingularB";
inline constexpr const char* reservoir_empty = "ReservoirEmpty";
inline constexpr const char* invalid_parameter = "InvalidParameter";
// control
inline constexpr const char* singular_g = "SingularG";
inline constexpr const char* origin_singularity = "OriginSingularity";
// engine
inline constexpr const char* non_finite_rate = "NonFiniteRate";
inline constexpr const char* ledger_violation = "LedgerViolation";
inline constexpr const char* missing_channel = "MissingChannel";
// io / cli
inline constexpr const char* parse_error = "ParseError";
inline constexpr const char* alpha_out_of_range = "AlphaOutOfRange";
inline constexpr const char* unknown_key = "UnknownKey";
inline constexpr const char* file_not_found = "FileNotFound";
} // namespace errc

} // namespace tmn
