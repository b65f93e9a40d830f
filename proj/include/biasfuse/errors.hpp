#pragma once
// Exception types shared by the library and the command-line front end.
//
// Domain violations (bad probabilities, non-canonical inputs, mismatched
// sizes) are std::invalid_argument. Work that would exceed a configured
// enumeration or table limit raises SizeGuardError. Malformed serialized
// input raises ParseError.

#include <stdexcept>
#include <string>

namespace biasfuse {

class SizeGuardError : public std::length_error {
public:
    using std::length_error::length_error;
};

class ParseError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace biasfuse
