// Copyright 2026 The flood-exposure Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef FLOOD_EXPOSURE_ERRORS_HPP
#define FLOOD_EXPOSURE_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace flood_exposure {

// Base of every library error. The CLI maps the category to an exit code.
class Error : public std::runtime_error {
public:
    enum class Category { io, validation, geometry };

    Error(Category category, const std::string& what)
        : std::runtime_error(what), category_(category) {}

    Category category() const noexcept { return category_; }

private:
    Category category_;
};

class IoError : public Error {
public:
    explicit IoError(const std::string& what) : Error(Category::io, what) {}
};

// Schema, range and uniqueness violations found while reading input files.
// `file`, `record` and `field` carry provenance; any of them may be empty.
class ValidationError : public Error {
public:
    enum class Kind {
        schema,
        duplicate_id,
        coordinate_out_of_range,
        negative_depth,
        invalid_geometry,
        proportion_out_of_range,
        tract_set_mismatch,
        empty_selection,
        bad_argument
    };

    ValidationError(Kind kind, std::string file, std::string record, std::string field,
                    const std::string& reason)
        : Error(Category::validation, format(file, record, field, reason)),
          kind_(kind),
          file_(std::move(file)),
          record_(std::move(record)),
          field_(std::move(field)) {}

    ValidationError(Kind kind, const std::string& reason)
        : ValidationError(kind, {}, {}, {}, reason) {}

    Kind kind() const noexcept { return kind_; }
    const std::string& file() const noexcept { return file_; }
    const std::string& record() const noexcept { return record_; }
    const std::string& field() const noexcept { return field_; }

private:
    static std::string format(const std::string& file, const std::string& record,
                              const std::string& field, const std::string& reason) {
        std::string out;
        if (!file.empty()) out += file + ": ";
        if (!record.empty()) out += record + ": ";
        if (!field.empty()) out += "field '" + field + "': ";
        return out + reason;
    }

    Kind kind_;
    std::string file_;
    std::string record_;
    std::string field_;
};

// Geometry failures. `topology` means the boolean kernel could not produce a
// valid arrangement from snapped input, which is a bug rather than bad data.
class GeometryError : public Error {
public:
    enum class Kind { degenerate_ring, invalid_topology, bad_radius, topology, antipodal_point, out_of_domain };

    GeometryError(Kind kind, const std::string& what) : Error(Category::geometry, what), kind_(kind) {}

    Kind kind() const noexcept { return kind_; }

private:
    Kind kind_;
};

}  // namespace flood_exposure

#endif
