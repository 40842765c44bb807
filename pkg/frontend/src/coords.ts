// Screenshot-pixel coordinates. The studio records annotations in raw
// screenshot pixels plus the scale factor the screenshot was displayed at;
// the server converts to CSS pixels, so the geometry math lives in one place.

import type { Region } from './types'

// display pixels -> screenshot pixels (what gets sent)
export function displayToScreenshot(region: Region, displayScale: number): Region {
  if (displayScale <= 0) throw new Error('display scale must be positive')
  if (region.kind === 'box') {
    const [x, y, w, h] = region.bbox
    return { kind: 'box', bbox: [x / displayScale, y / displayScale, w / displayScale, h / displayScale] }
  }
  const [x, y] = region.point
  return { kind: 'point', point: [x / displayScale, y / displayScale] }
}

// mirror of the server's screenshot-pixel -> CSS-pixel conversion, for
// round-trip checks only
export function screenshotToCss(region: Region, renderScale: number): Region {
  if (renderScale <= 0) throw new Error('render scale must be positive')
  if (region.kind === 'box') {
    const [x, y, w, h] = region.bbox
    return { kind: 'box', bbox: [x / renderScale, y / renderScale, w / renderScale, h / renderScale] }
  }
  const [x, y] = region.point
  return { kind: 'point', point: [x / renderScale, y / renderScale] }
}

export function cssToScreenshot(region: Region, renderScale: number): Region {
  if (renderScale <= 0) throw new Error('render scale must be positive')
  if (region.kind === 'box') {
    const [x, y, w, h] = region.bbox
    return { kind: 'box', bbox: [x * renderScale, y * renderScale, w * renderScale, h * renderScale] }
  }
  const [x, y] = region.point
  return { kind: 'point', point: [x * renderScale, y * renderScale] }
}

export function maxCoordinateError(a: Region, b: Region): number {
  const va = a.kind === 'box' ? a.bbox : a.point
  const vb = b.kind === 'box' ? b.bbox : b.point
  let worst = 0
  for (let i = 0; i < va.length; i++) {
    worst = Math.max(worst, Math.abs(va[i] - (vb as number[])[i]))
  }
  return worst
}

// drag rectangle from two corners, any drag direction
export function dragToBox(x0: number, y0: number, x1: number, y1: number): Region {
  const x = Math.min(x0, x1)
  const y = Math.min(y0, y1)
  return { kind: 'box', bbox: [x, y, Math.abs(x1 - x0), Math.abs(y1 - y0)] }
}
