#include "pakf/error.hpp"

namespace pakf {

void rethrow_with_context(const Error& e, const std::string& context) {
  const std::string what = context + ": " + e.what();
  if (dynamic_cast<const InfinitePsnr*>(&e) != nullptr) throw InfinitePsnr(what);
  switch (e.kind()) {
    case ErrorKind::usage:
      throw UsageError(what);
    case ErrorKind::data:
      throw DataError(what);
    case ErrorKind::numerical:
      break;
  }
  throw NumericalError(what);
}

}  // namespace pakf
