// Map rendering onto a minimal 2D context interface, so tests can count
// draw calls with a stub. Colors follow the mapping convention: path red,
// intersections blue, hallway arrows yellow, doors green.

import { SessionView } from "./state.js";

export interface Stroke2D {
  beginPath(): void;
  moveTo(x: number, y: number): void;
  lineTo(x: number, y: number): void;
  arc(x: number, y: number, r: number, a0: number, a1: number): void;
  rect(x: number, y: number, w: number, h: number): void;
  stroke(): void;
  fill(): void;
  fillText(text: string, x: number, y: number): void;
  set strokeStyle(v: string);
  set fillStyle(v: string);
  set lineWidth(v: number);
  set font(v: string);
}

export interface Viewport {
  scale: number;       // pixels per meter
  offsetX: number;     // pixel offset of world origin
  offsetY: number;
  height: number;      // canvas height in pixels (for y flip)
}

export function worldToCanvas(viewport: Viewport, x: number, y: number):
    [number, number] {
  return [x * viewport.scale + viewport.offsetX,
          viewport.height - (y * viewport.scale + viewport.offsetY)];
}

export function fitViewport(bounds: [number, number, number, number],
                            width: number, height: number): Viewport {
  const [x0, y0, x1, y1] = bounds;
  const scale = Math.min(width / (x1 - x0), height / (y1 - y0)) * 0.92;
  return {
    scale,
    offsetX: width / 2 - ((x0 + x1) / 2) * scale,
    offsetY: height / 2 - ((y0 + y1) / 2) * scale,
    height,
  };
}

function line(ctx: Stroke2D, vp: Viewport, a: [number, number],
              b: [number, number]): void {
  const [ax, ay] = worldToCanvas(vp, a[0], a[1]);
  const [bx, by] = worldToCanvas(vp, b[0], b[1]);
  ctx.beginPath();
  ctx.moveTo(ax, ay);
  ctx.lineTo(bx, by);
  ctx.stroke();
}

export interface RenderCounts {
  walls: number;
  pathPoints: number;
  intersections: number;
  edges: number;
  hallways: number;
  doors: number;
  robot: boolean;
}

export function renderScene(view: SessionView, ctx: Stroke2D,
                            vp: Viewport): RenderCounts {
  const counts: RenderCounts = {
    walls: 0, pathPoints: 0, intersections: 0, edges: 0, hallways: 0,
    doors: 0, robot: false,
  };
  if (view.hello !== null) {
    ctx.strokeStyle = "#444";
    ctx.lineWidth = 2;
    for (const [x1, y1, x2, y2] of view.hello.walls) {
      line(ctx, vp, [x1, y1], [x2, y2]);
      counts.walls += 1;
    }
    ctx.fillStyle = "#2a2a2a";
    ctx.font = "11px sans-serif";
    for (const door of view.hello.doors) {
      const [dx, dy] = worldToCanvas(vp, door.center[0], door.center[1]);
      ctx.fillText(door.tag, dx + 6, dy - 6);
    }
  }
  const snapshot = view.snapshot;
  if (snapshot === null) {
    return counts;
  }

  if (snapshot.path.length > 1) {
    ctx.strokeStyle = "red";
    ctx.lineWidth = 2;
    ctx.beginPath();
    const [sx, sy] = worldToCanvas(vp, snapshot.path[0][0],
                                   snapshot.path[0][1]);
    ctx.moveTo(sx, sy);
    for (const [px, py] of snapshot.path.slice(1)) {
      const [cx, cy] = worldToCanvas(vp, px, py);
      ctx.lineTo(cx, cy);
      counts.pathPoints += 1;
    }
    ctx.stroke();
  }

  const qmap = snapshot.qualitative_map;
  const vertexById = new Map(qmap.vertices.map((v) => [v.id, v]));
  ctx.strokeStyle = "#40a0ff";
  ctx.lineWidth = 3;
  for (const edge of qmap.edges) {
    const a = vertexById.get(edge.int_a);
    const b = vertexById.get(edge.int_b);
    if (a && b) {
      line(ctx, vp, a.location, b.location);
      counts.edges += 1;
    }
  }
  for (const vertex of qmap.vertices) {
    ctx.strokeStyle = "#e0c010";
    ctx.lineWidth = 2;
    for (const hallway of vertex.hallways) {
      if (!hallway.active) {
        continue;
      }
      line(ctx, vp, vertex.location, hallway.target);
      counts.hallways += 1;
    }
    const [cx, cy] = worldToCanvas(vp, vertex.location[0],
                                   vertex.location[1]);
    ctx.fillStyle = "blue";
    ctx.beginPath();
    ctx.arc(cx, cy, 6, 0, Math.PI * 2);
    ctx.fill();
    counts.intersections += 1;
  }

  ctx.fillStyle = "green";
  for (const cluster of snapshot.door_clusters) {
    const [cx, cy] = worldToCanvas(vp, cluster.center[0], cluster.center[1]);
    ctx.beginPath();
    ctx.rect(cx - 4, cy - 4, 8, 8);
    ctx.fill();
    counts.doors += 1;
  }

  const pose = snapshot.pose;
  const [rx, ry] = worldToCanvas(vp, pose.x, pose.y);
  ctx.fillStyle = "#111";
  ctx.beginPath();
  ctx.arc(rx, ry, 5, 0, Math.PI * 2);
  ctx.fill();
  ctx.strokeStyle = "#111";
  ctx.lineWidth = 2;
  const hx = pose.x + 0.6 * Math.cos(pose.heading);
  const hy = pose.y + 0.6 * Math.sin(pose.heading);
  line(ctx, vp, [pose.x, pose.y], [hx, hy]);
  counts.robot = true;
  return counts;
}
