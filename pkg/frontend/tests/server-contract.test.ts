// @vitest-environment node
//
// Integration against the real backend: a uipref server is spawned on a
// prepared store and every studio view submits its record through the real
// HTTP API. Passing here means the server accepted each view's record
// unmodified.

import { execSync, spawn, type ChildProcess } from 'node:child_process'
import { mkdtempSync, rmSync } from 'node:fs'
import { tmpdir } from 'node:os'
import { join } from 'node:path'
import { Window } from 'happy-dom'
import { afterAll, beforeAll, describe, expect, test } from 'vitest'

import { ApiClient } from '../src/api'
import { CommentingView } from '../src/views/commenting'
import { DashboardView } from '../src/views/dashboard'
import { JudgeView } from '../src/views/judge'
import { RankingView } from '../src/views/ranking'
import { RevisingView } from '../src/views/revising'
import { SketchingView } from '../src/views/sketching'

const PORT = 8791
const BASE = `http://127.0.0.1:${PORT}`

let server: ChildProcess | null = null
let storeDir = ''
let window_: Window

function cli(args: string): void {
  execSync(`uipref --store ${storeDir} --seed 5 ${args}`, { stdio: 'pipe' })
}

async function waitForServer(): Promise<void> {
  for (let i = 0; i < 100; i++) {
    try {
      const response = await fetch(`${BASE}/reports/study-stats`)
      if (response.ok) return
    } catch {
      // not up yet
    }
    await new Promise((r) => setTimeout(r, 200))
  }
  throw new Error('server did not come up')
}

beforeAll(async () => {
  storeDir = mkdtempSync(join(tmpdir(), 'uipref-contract-'))
  cli('gen-descriptions --target-n 2')
  cli('gen-candidates --n 4')
  cli('gen-candidates --n 1 --model alpha')
  cli('gen-candidates --n 1 --model beta')
  cli('render')
  cli('filter --k 2')
  server = spawn('uipref', ['--store', storeDir, 'serve', '--port', String(PORT)], {
    stdio: 'ignore',
  })
  await waitForServer()
  window_ = new Window()
}, 120_000)

afterAll(() => {
  server?.kill()
  if (storeDir) rmSync(storeDir, { recursive: true, force: true })
})

function doc(): Document {
  return window_.document as unknown as Document
}

function container(): HTMLElement {
  const el = doc().createElement('div')
  doc().body.appendChild(el)
  return el
}

function api(): ApiClient {
  return new ApiClient({ baseUrl: BASE })
}

describe('every view submits records the server accepts unmodified', () => {
  test('ranking view', async () => {
    const view = new RankingView({
      api: api(),
      container: container(),
      annotator: 'contract-p1',
      documentRef: doc(),
    })
    await view.load()
    await view.choose('left') // throws on any non-2xx
    expect(view.submitted).toBe(true)
  })

  test('commenting view', async () => {
    const view = new CommentingView({
      api: api(),
      container: container(),
      annotator: 'contract-p1',
      documentRef: doc(),
    })
    await view.load()
    view.addComment('the hierarchy is unclear')
    view.addComment('buttons are cramped')
    await view.submit()
    expect(view.submitted).toBe(true)
  })

  test('sketching view with screenshot-pixel coordinates', async () => {
    const view = new SketchingView({
      api: api(),
      container: container(),
      annotator: 'contract-p1',
      documentRef: doc(),
      displayScale: 0.5,
      promptForComment: () => 'tighten this area',
    })
    await view.load()
    view.pointerDown(10, 10)
    view.pointerUp(110, 60)
    expect(view.attachComment('tighten this area')).toBe(true)
    view.pointerDown(200, 300)
    view.pointerUp(201, 300)
    expect(view.attachComment('align this icon')).toBe(true)
    await view.submit()
    expect(view.submitted).toBe(true)
  })

  test('revising view uploads and references the revised document', async () => {
    const view = new RevisingView({
      api: api(),
      container: container(),
      annotator: 'contract-p1',
      documentRef: doc(),
    })
    await view.load()

    // identical bytes: fetch the original document and re-upload it
    const original = new Uint8Array(
      await (await fetch(`${BASE}/blobs/${view.task.sketch_refs[0]}`)).arrayBuffer(),
    )
    expect(await view.acceptUpload(original)).toBeNull()
    expect(view.lastError).toMatch(/identical/)

    // a real change is accepted end to end
    const revised = new TextEncoder().encode(
      new TextDecoder().decode(original).replace('"frame":[', '"frame":[1,').replace(',]', ']'),
    )
    const record = await view.acceptUpload(revised)
    expect(record).not.toBeNull()
    expect(view.complete).toBe(true)
  })

  test('judge view posts battles the ratings report picks up', async () => {
    const judge = new JudgeView({
      api: api(),
      container: container(),
      judgeId: 'contract-j1',
      documentRef: doc(),
    })
    await judge.load()
    const dom = (judge as unknown as { deps: { container: HTMLElement } }).deps.container.innerHTML
    expect(dom.toLowerCase()).not.toContain('alpha')
    expect(dom.toLowerCase()).not.toContain('beta')
    await judge.vote('left')
    expect(judge.pendingBattles).toBeGreaterThan(0)

    const dashboard = new DashboardView({ api: api(), container: container(), documentRef: doc() })
    await dashboard.load()
    expect(dashboard.report.battles).toBeGreaterThan(0)
    expect(Object.keys(dashboard.report.ratings).sort()).toEqual(['alpha', 'beta'])
  })

  test('server-side study stats reflect the contract submissions', async () => {
    const stats = (await (await fetch(`${BASE}/reports/study-stats`)).json()) as {
      total: number
      per_interface: Record<string, { count: number }>
    }
    expect(stats.per_interface['ranking'].count).toBe(1)
    expect(stats.per_interface['commenting'].count).toBe(1)
    expect(stats.per_interface['sketching'].count).toBe(1)
    expect(stats.per_interface['revising'].count).toBe(1)
  })
})
