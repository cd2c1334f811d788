//! Points and the planar shapes used as domains and regions.

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Point {
    pub x: f64,
    pub y: f64,
}

impl Point {
    pub const ORIGIN: Point = Point { x: 0.0, y: 0.0 };

    pub const fn new(x: f64, y: f64) -> Self {
        Self { x, y }
    }

    pub fn dist(&self, other: &Point) -> f64 {
        (self.x - other.x).hypot(self.y - other.y)
    }

    pub fn norm(&self) -> f64 {
        self.x.hypot(self.y)
    }

    pub fn offset(&self, dx: f64, dy: f64) -> Point {
        Point::new(self.x + dx, self.y + dy)
    }
}

impl std::ops::Sub for Point {
    type Output = Point;
    fn sub(self, rhs: Point) -> Point {
        Point::new(self.x - rhs.x, self.y - rhs.y)
    }
}

impl std::ops::Add for Point {
    type Output = Point;
    fn add(self, rhs: Point) -> Point {
        Point::new(self.x + rhs.x, self.y + rhs.y)
    }
}

/// Planar shapes. Squares and rectangles are half-open boxes
/// `[min, max)`, balls are closed.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Shape {
    Square { origin: Point, side: f64 },
    Ball { center: Point, radius: f64 },
    Rectangle { min: Point, max: Point },
}

impl Shape {
    pub fn square(origin: Point, side: f64) -> Self {
        Shape::Square { origin, side }
    }

    /// Square of half-side `half` centered at `center`.
    pub fn centered_square(center: Point, half: f64) -> Self {
        Shape::Square {
            origin: center.offset(-half, -half),
            side: 2.0 * half,
        }
    }

    pub fn ball(center: Point, radius: f64) -> Self {
        Shape::Ball { center, radius }
    }

    pub fn rectangle(min: Point, max: Point) -> Self {
        Shape::Rectangle { min, max }
    }

    pub fn is_degenerate(&self) -> bool {
        match *self {
            Shape::Square { side, .. } => !(side > 0.0 && side.is_finite()),
            Shape::Ball { radius, .. } => !(radius > 0.0 && radius.is_finite()),
            Shape::Rectangle { min, max } => !(max.x > min.x && max.y > min.y),
        }
    }

    pub fn contains(&self, p: &Point) -> bool {
        match *self {
            Shape::Square { origin, side } => {
                p.x >= origin.x && p.x < origin.x + side && p.y >= origin.y && p.y < origin.y + side
            }
            Shape::Ball { center, radius } => {
                let dx = p.x - center.x;
                let dy = p.y - center.y;
                dx * dx + dy * dy <= radius * radius
            }
            Shape::Rectangle { min, max } => {
                p.x >= min.x && p.x < max.x && p.y >= min.y && p.y < max.y
            }
        }
    }

    /// Closed bounding box `(min, max)`.
    pub fn bounds(&self) -> (Point, Point) {
        match *self {
            Shape::Square { origin, side } => (origin, origin.offset(side, side)),
            Shape::Ball { center, radius } => {
                (center.offset(-radius, -radius), center.offset(radius, radius))
            }
            Shape::Rectangle { min, max } => (min, max),
        }
    }

    /// Distance from a point inside the shape to its boundary; zero outside.
    pub fn boundary_distance(&self, p: &Point) -> f64 {
        let d = match *self {
            Shape::Ball { center, radius } => radius - p.dist(&center),
            _ => {
                let (lo, hi) = self.bounds();
                (p.x - lo.x).min(hi.x - p.x).min(p.y - lo.y).min(hi.y - p.y)
            }
        };
        d.max(0.0)
    }

    pub fn tag(&self) -> &'static str {
        match self {
            Shape::Square { .. } => "square",
            Shape::Ball { .. } => "ball",
            Shape::Rectangle { .. } => "rectangle",
        }
    }
}
