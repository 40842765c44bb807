// Ratings dashboard: Elo medians with CI bars plus a win-rate heatmap.
// Bar geometry is pure arithmetic over the report so it can be checked
// against the data directly.

import { ApiClient } from '../api'
import type { RatingsReport } from '../types'

export interface DashboardDeps {
  api: ApiClient
  container: HTMLElement
  documentRef?: Document
  width?: number
}

export interface BarGeometry {
  model: string
  median: number
  barStart: number // px offset of ci_low
  barWidth: number // px width of the CI
  medianTick: number // px offset of the median
}

export function barGeometry(report: RatingsReport, width: number): BarGeometry[] {
  const ratings = Object.entries(report.ratings)
  const lows = ratings.map(([, r]) => r.ci_low)
  const highs = ratings.map(([, r]) => r.ci_high)
  const min = Math.min(...lows)
  const max = Math.max(...highs)
  const span = max - min || 1
  const scale = (v: number) => ((v - min) / span) * width
  return ratings
    .map(([model, r]) => ({
      model,
      median: r.median,
      barStart: scale(r.ci_low),
      barWidth: scale(r.ci_high) - scale(r.ci_low),
      medianTick: scale(r.median),
    }))
    .sort((a, b) => b.median - a.median)
}

export function heatColor(rate: number): string {
  // 0 -> cold blue, 1 -> warm red
  const warm = Math.round(rate * 255)
  return `rgb(${warm}, 80, ${255 - warm})`
}

export class DashboardView {
  report: RatingsReport = null!
  private doc: Document
  private width: number

  constructor(private deps: DashboardDeps) {
    this.doc = deps.documentRef ?? document
    this.width = deps.width ?? 400
  }

  async load(): Promise<void> {
    this.report = await this.deps.api.ratings()
    this.render()
  }

  private render(): void {
    const root = this.deps.container
    root.innerHTML = ''

    const heading = this.doc.createElement('h2')
    heading.textContent = `ratings over ${this.report.battles} battles`
    root.appendChild(heading)

    const bars = this.doc.createElement('div')
    bars.className = 'rating-bars'
    for (const bar of barGeometry(this.report, this.width)) {
      const row = this.doc.createElement('div')
      row.className = 'rating-row'
      row.dataset.model = bar.model
      row.dataset.median = bar.median.toFixed(1)

      const label = this.doc.createElement('span')
      label.textContent = `${bar.model} (${bar.median.toFixed(0)})`

      const track = this.doc.createElement('div')
      track.className = 'ci-track'
      track.style.width = `${this.width}px`
      const fill = this.doc.createElement('div')
      fill.className = 'ci-bar'
      fill.style.marginLeft = `${bar.barStart.toFixed(1)}px`
      fill.style.width = `${Math.max(bar.barWidth, 1).toFixed(1)}px`
      const tick = this.doc.createElement('div')
      tick.className = 'median-tick'
      tick.style.marginLeft = `${bar.medianTick.toFixed(1)}px`
      track.append(fill, tick)

      row.append(label, track)
      bars.appendChild(row)
    }
    root.appendChild(bars)

    root.appendChild(this.renderHeatmap())
  }

  private renderHeatmap(): HTMLElement {
    const models = Object.keys(this.report.ratings).sort()
    const table = this.doc.createElement('table')
    table.className = 'win-heatmap'
    const header = this.doc.createElement('tr')
    header.appendChild(this.doc.createElement('th'))
    for (const model of models) {
      const th = this.doc.createElement('th')
      th.textContent = model
      header.appendChild(th)
    }
    table.appendChild(header)

    for (const row_model of models) {
      const tr = this.doc.createElement('tr')
      const th = this.doc.createElement('th')
      th.textContent = row_model
      tr.appendChild(th)
      for (const col_model of models) {
        const td = this.doc.createElement('td')
        if (row_model !== col_model) {
          const rate = this.report.win_rates[`${row_model}|${col_model}`]
          if (rate !== undefined) {
            td.textContent = rate.toFixed(2)
            td.style.backgroundColor = heatColor(rate)
            td.dataset.rate = String(rate)
          } else {
            td.textContent = '–'
          }
        }
        tr.appendChild(td)
      }
      table.appendChild(tr)
    }
    return table
  }
}
