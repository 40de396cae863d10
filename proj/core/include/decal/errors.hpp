#pragma once

#include <stdexcept>
#include <string>

namespace decal {

/// Base class for every error thrown by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// (p,q,r,d) does not describe a usable algebra (e.g. block length m = 0).
class InvalidSignature : public Error {
public:
    using Error::Error;
};

/// Element block counts or block lengths disagree with the signature.
class ShapeMismatch : public Error {
public:
    using Error::Error;
};

/// Full-multivector oracle invoked beyond its supported generator count.
class OracleScaleExceeded : public Error {
public:
    using Error::Error;
};

class IdOutOfRange : public Error {
public:
    using Error::Error;
};

class LengthMismatch : public Error {
public:
    using Error::Error;
};

/// A gradient entry was NaN or infinite.
class NonFiniteGradient : public Error {
public:
    using Error::Error;
};

class EmptyTrainSet : public Error {
public:
    using Error::Error;
};

class EmptySplit : public Error {
public:
    using Error::Error;
};

class TrueTailMissing : public Error {
public:
    using Error::Error;
};

class MissingFile : public Error {
public:
    using Error::Error;
};

/// A dataset line that does not parse as "head<TAB>relation<TAB>tail".
class MalformedLine : public Error {
public:
    using Error::Error;
};

} // namespace decal
