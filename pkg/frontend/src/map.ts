// Minimal slippy map: raster tiles from a {z}/{x}/{y} URL template, click to
// coordinates, one marker. Web Mercator math is exported for tests.

import { GeoPoint } from "./types.js";

export const TILE_SIZE = 256;

export function lonToWorldX(lon: number, zoom: number): number {
  return ((lon + 180) / 360) * TILE_SIZE * 2 ** zoom;
}

export function latToWorldY(lat: number, zoom: number): number {
  const rad = (lat * Math.PI) / 180;
  const merc = Math.log(Math.tan(Math.PI / 4 + rad / 2));
  return ((1 - merc / Math.PI) / 2) * TILE_SIZE * 2 ** zoom;
}

export function worldXToLon(x: number, zoom: number): number {
  return (x / (TILE_SIZE * 2 ** zoom)) * 360 - 180;
}

export function worldYToLat(y: number, zoom: number): number {
  const n = Math.PI * (1 - (2 * y) / (TILE_SIZE * 2 ** zoom));
  return (Math.atan(Math.sinh(n)) * 180) / Math.PI;
}

export class SlippyMap {
  private center: GeoPoint = { lat: 44.4268, lon: 26.1025 };
  private zoom = 13;
  private marker: HTMLElement;
  private tileLayer: HTMLElement;
  onClick: ((point: GeoPoint) => void) | null = null;

  constructor(
    private container: HTMLElement,
    private tileUrl: string,
  ) {
    container.classList.add("map");
    this.tileLayer = document.createElement("div");
    this.tileLayer.className = "map-tiles";
    container.appendChild(this.tileLayer);

    this.marker = document.createElement("div");
    this.marker.className = "map-marker";
    this.marker.style.display = "none";
    container.appendChild(this.marker);

    container.addEventListener("click", (event) => {
      const point = this.pixelToLatLon(event.offsetX, event.offsetY);
      this.onClick?.(point);
    });
    this.render();
  }

  recenter(point: GeoPoint): void {
    this.center = point;
    this.render();
  }

  dropMarker(point: GeoPoint): void {
    this.center = point;
    this.render();
    const { x, y } = this.latLonToPixel(point);
    this.marker.style.display = "block";
    this.marker.style.left = `${x}px`;
    this.marker.style.top = `${y}px`;
  }

  private viewSize(): { w: number; h: number } {
    return { w: this.container.clientWidth || 600, h: this.container.clientHeight || 400 };
  }

  pixelToLatLon(px: number, py: number): GeoPoint {
    const { w, h } = this.viewSize();
    const worldX = lonToWorldX(this.center.lon, this.zoom) + (px - w / 2);
    const worldY = latToWorldY(this.center.lat, this.zoom) + (py - h / 2);
    return {
      lat: Math.round(worldYToLat(worldY, this.zoom) * 1e6) / 1e6,
      lon: Math.round(worldXToLon(worldX, this.zoom) * 1e6) / 1e6,
    };
  }

  latLonToPixel(point: GeoPoint): { x: number; y: number } {
    const { w, h } = this.viewSize();
    return {
      x: lonToWorldX(point.lon, this.zoom) - lonToWorldX(this.center.lon, this.zoom) + w / 2,
      y: latToWorldY(point.lat, this.zoom) - latToWorldY(this.center.lat, this.zoom) + h / 2,
    };
  }

  private render(): void {
    const { w, h } = this.viewSize();
    const worldX = lonToWorldX(this.center.lon, this.zoom);
    const worldY = latToWorldY(this.center.lat, this.zoom);
    const firstTileX = Math.floor((worldX - w / 2) / TILE_SIZE);
    const firstTileY = Math.floor((worldY - h / 2) / TILE_SIZE);
    const lastTileX = Math.floor((worldX + w / 2) / TILE_SIZE);
    const lastTileY = Math.floor((worldY + h / 2) / TILE_SIZE);

    this.tileLayer.textContent = "";
    for (let tx = firstTileX; tx <= lastTileX; tx++) {
      for (let ty = firstTileY; ty <= lastTileY; ty++) {
        const img = document.createElement("img");
        img.className = "map-tile";
        img.src = this.tileUrl
          .replace("{z}", String(this.zoom))
          .replace("{x}", String(tx))
          .replace("{y}", String(ty));
        img.style.left = `${tx * TILE_SIZE - (worldX - w / 2)}px`;
        img.style.top = `${ty * TILE_SIZE - (worldY - h / 2)}px`;
        img.alt = "";
        this.tileLayer.appendChild(img);
      }
    }
  }
}
