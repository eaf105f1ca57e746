#pragma once

namespace oig
{
    inline constexpr const char * version = "0.1.0";
}
