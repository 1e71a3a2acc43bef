#include "binmorph/structuring_element.hpp"

#include <algorithm>
#include <cstdlib>
#include <stdexcept>

namespace binmorph {

StructuringElement::StructuringElement(std::vector<Offset> offsets, std::string name)
    : offsets_(std::move(offsets)), name_(std::move(name)) {
    if (offsets_.empty()) {
        throw std::invalid_argument("structuring element must contain at least one offset");
    }
    std::sort(offsets_.begin(), offsets_.end());
    if (std::adjacent_find(offsets_.begin(), offsets_.end()) != offsets_.end()) {
        throw std::invalid_argument("structuring element offsets must be unique");
    }
}

StructuringElement StructuringElement::cross6() {
    return StructuringElement({{0, 0, 0}, {-1, 0, 0}, {1, 0, 0}, {0, -1, 0}, {0, 1, 0}, {0, 0, -1}, {0, 0, 1}},
                              "cross6");
}

StructuringElement StructuringElement::cube27() {
    std::vector<Offset> offsets;
    for (int dz = -1; dz <= 1; ++dz) {
        for (int dy = -1; dy <= 1; ++dy) {
            for (int dx = -1; dx <= 1; ++dx) {
                offsets.push_back({dx, dy, dz});
            }
        }
    }
    return StructuringElement(std::move(offsets), "cube27");
}

StructuringElement StructuringElement::point() {
    return StructuringElement({{0, 0, 0}}, "point");
}

std::optional<StructuringElement> StructuringElement::builtin(const std::string& name) {
    if (name == "cross6") return cross6();
    if (name == "cube27") return cube27();
    if (name == "point") return point();
    return std::nullopt;
}

bool StructuringElement::contains(const Offset& o) const {
    return std::binary_search(offsets_.begin(), offsets_.end(), o);
}

int StructuringElement::reach() const {
    int r = 0;
    for (const Offset& o : offsets_) {
        r = std::max({r, std::abs(o.dx), std::abs(o.dy), std::abs(o.dz)});
    }
    return r;
}

StructuringElement StructuringElement::reflect() const {
    std::vector<Offset> out;
    out.reserve(offsets_.size());
    for (const Offset& o : offsets_) {
        out.push_back({-o.dx, -o.dy, -o.dz});
    }
    StructuringElement reflected(std::move(out));
    if (reflected == *this) {
        reflected.name_ = name_;
    }
    return reflected;
}

}  // namespace binmorph
