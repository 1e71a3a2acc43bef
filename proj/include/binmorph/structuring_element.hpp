#pragma once

#include <optional>
#include <string>
#include <vector>

namespace binmorph {

struct Offset {
    int dx = 0;
    int dy = 0;
    int dz = 0;

    friend auto operator<=>(const Offset&, const Offset&) = default;
};

/// Finite, non-empty set of integer 3D offsets. Offsets are kept sorted so two
/// elements with the same set compare equal regardless of construction order.
class StructuringElement {
public:
    explicit StructuringElement(std::vector<Offset> offsets, std::string name = {});

    /// Origin plus the 6 face neighbors.
    static StructuringElement cross6();
    /// Full 3x3x3 block.
    static StructuringElement cube27();
    /// Origin only; the identity element for dilate and erode.
    static StructuringElement point();
    /// Built-in element by name ("cross6", "cube27", "point"), or nullopt.
    static std::optional<StructuringElement> builtin(const std::string& name);

    const std::vector<Offset>& offsets() const { return offsets_; }
    const std::string& name() const { return name_; }
    std::size_t size() const { return offsets_.size(); }
    bool contains(const Offset& o) const;
    bool contains_origin() const { return contains(Offset{}); }
    /// Largest absolute coordinate over all offsets.
    int reach() const;
    /// Point reflection through the origin.
    StructuringElement reflect() const;

    friend bool operator==(const StructuringElement& a, const StructuringElement& b) {
        return a.offsets_ == b.offsets_;
    }

private:
    std::vector<Offset> offsets_;
    std::string name_;
};

}  // namespace binmorph
