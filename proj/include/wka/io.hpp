// JSON files for algebras, weak Kac algebras, actions and crossed products.
// Complex numbers are [re, im] pairs; matrices are arrays of rows.

#ifndef WKA_IO_HPP_
#define WKA_IO_HPP_

#include <string>

#include "wka/crossed.hpp"

namespace wka {

inline constexpr const char* format_version = "1.0";

/// Malformed input.  The message carries the position: a line and column
/// for syntax errors, a JSON pointer for shape and value errors.
class ParseError : public Error {
public:
  using Error::Error;
};

Json matrix_to_json(const Mat& m);
Json vector_to_json(const Eigen::VectorXcd& v);
/// Expects rows x cols; `where` is the JSON pointer used in error messages.
Mat matrix_from_json(const Json& j, Eigen::Index rows, Eigen::Index cols, const std::string& where);
Eigen::VectorXcd vector_from_json(const Json& j, Eigen::Index size, const std::string& where);

Json to_json(const StarAlgebra& a);
Json to_json(const WeakKacAlgebra& k);
Json to_json(const ActionSpec& s);
Json to_json(const CrossedProduct& cp);

/// Checks format_version and returns kind.
std::string kind_of(const Json& doc);

StarAlgebra star_algebra_from_json(const Json& doc);
WeakKacAlgebra weak_kac_from_json(const Json& doc);
ActionSpec action_from_json(const Json& doc, const Tolerance& tol);
CrossedProduct crossed_product_from_json(const Json& doc, const Tolerance& tol);

/// `source` names the input in error messages.
Json parse_document(const std::string& text, const std::string& source);
std::string serialize(const Json& doc);

/// "-" reads standard input.
std::string read_text(const std::string& path);
void write_text(const std::string& path, const std::string& text);

} // namespace wka

#endif // WKA_IO_HPP_
