#pragma once

#include <stdexcept>

namespace oig
{
    // Base class for all errors raised by the library.
    struct Error : std::runtime_error
    {
        using std::runtime_error::runtime_error;
    };

    // An exhaustive solve would exceed its evaluation budget.
    struct BudgetError : Error
    {
        using Error::Error;
    };
}
