#pragma once

namespace procmine {

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};

}  // namespace procmine
