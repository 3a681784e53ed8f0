//! Planar points.

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Point {
    pub x: f64,
    pub y: f64,
}

impl Point {
    pub const ORIGIN: Point = Point { x: 0.0, y: 0.0 };

    pub const fn new(x: f64, y: f64) -> Self {
        Point { x, y }
    }

    pub fn polar(r: f64, angle: f64) -> Self {
        Point { x: r * libm::cos(angle), y: r * libm::sin(angle) }
    }

    pub fn distance_squared(&self, o: &Point) -> f64 {
        let dx = self.x - o.x;
        let dy = self.y - o.y;
        dx * dx + dy * dy
    }

    pub fn distance(&self, o: &Point) -> f64 {
        libm::sqrt(self.distance_squared(o))
    }

    pub fn norm(&self) -> f64 {
        libm::hypot(self.x, self.y)
    }
}
