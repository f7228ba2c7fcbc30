use serde::{Deserialize, Serialize};

/// Head-frame axis: X left to right ear, Y back to nose, Z up.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Axis {
    X,
    Y,
    Z,
}

impl Axis {
    pub fn as_str(self) -> &'static str {
        match self {
            Axis::X => "x",
            Axis::Y => "y",
            Axis::Z => "z",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RotationMatrix {
    pub matrix: [[f64; 3]; 3],
    pub axis: Axis,
    pub degrees: f64,
}

impl RotationMatrix {
    pub fn apply(&self, p: [f64; 3]) -> [f64; 3] {
        let m = &self.matrix;
        [
            m[0][0] * p[0] + m[0][1] * p[1] + m[0][2] * p[2],
            m[1][0] * p[0] + m[1][1] * p[1] + m[1][2] * p[2],
            m[2][0] * p[0] + m[2][1] * p[1] + m[2][2] * p[2],
        ]
    }

    pub fn compose(&self, other: &RotationMatrix) -> [[f64; 3]; 3] {
        let mut out = [[0.0; 3]; 3];
        for (i, row) in out.iter_mut().enumerate() {
            for (j, v) in row.iter_mut().enumerate() {
                *v = (0..3).map(|k| self.matrix[i][k] * other.matrix[k][j]).sum();
            }
        }
        out
    }
}

/// Right-handed rotation by `degrees` about `axis`.
pub fn rotation(axis: Axis, degrees: f64) -> RotationMatrix {
    let (s, c) = degrees.to_radians().sin_cos();
    let matrix = match axis {
        Axis::X => [[1.0, 0.0, 0.0], [0.0, c, -s], [0.0, s, c]],
        Axis::Y => [[c, 0.0, s], [0.0, 1.0, 0.0], [-s, 0.0, c]],
        Axis::Z => [[c, -s, 0.0], [s, c, 0.0], [0.0, 0.0, 1.0]],
    };
    RotationMatrix {
        matrix,
        axis,
        degrees,
    }
}
