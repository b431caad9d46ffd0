from .body import Body, PhysicsParams, Role, wrap_angle
from .bumpers import BUMPER_NAMES, CHASSIS_RADIUS, ROBOT_MASS, robot_shape
from .collision import Contact, collide_convex, collide_shapes, shape_aabb
from .kinematics import WHEEL_BASE, integrate_unicycle, wheels_to_twist
from .shapes import (
    Compound,
    ConvexPolygon,
    Disc,
    ShapeError,
    box,
    convex_hull,
    polygon_area,
    polygon_centroid,
    regular_polygon,
    transform_points,
)
from .world import SolverDivergence, World
