"""
A patrol route through the scene and what the camera sees
=========================================================

The camera rides a closed loop of cubic Bezier segments threaded through
the storage sites, pausing at evenly spaced stops.  Spacing comes from the
route's speed and stop interval measured in frames.  At each stop the
camera sees whatever falls inside its field-of-view wedge and range.  This
script builds the route for a scene, lists the stops, and tallies the
visible objects per stop.
"""

from relabel import (
    camera_stops,
    generate_scene,
    patrol_route,
    visible_objects,
)
from relabel.path import path_length

layout = generate_scene("H1", seed=0)
route = patrol_route(layout)
print(f"scene {layout.name}: {len(layout.sites)} sites, "
      f"{len(layout.objects)} objects")
print(f"route: {len(route.segments)} Bezier segments, "
      f"{path_length(route):.1f} m long")

# Stop spacing = speed * stop_interval / frame_rate.  The defaults walk
# the loop at 1 m/s pausing every 100 frames of 60 fps footage.
stops = camera_stops(route, fov=60.0, range=10.0, frame_rate=60.0)
print(f"{len(stops)} stops, spacing {route.speed * route.stop_interval / 60.0:.2f} m")
print()

print(f"{'stop':>4}  {'at (x, z)':>14}  {'yaw':>6}  {'visible':>7}")
total = 0
for k, cam in enumerate(stops):
    seen = visible_objects(layout, cam)
    total += len(seen)
    print(f"{k:>4}  ({cam.position[0]:5.1f}, {cam.position[1]:5.1f})  "
          f"{cam.yaw:>6.1f}  {len(seen):>7}")
print()

# Stops overlap on purpose: most objects are seen more than once per lap,
# so a label missed at one stop gets another chance at the next.
labels = set()
for cam in stops:
    labels.update(o.label for o in visible_objects(layout, cam))
print(f"{total} sightings of {len(labels)} distinct objects "
      f"({len(layout.objects)} in scene)")
