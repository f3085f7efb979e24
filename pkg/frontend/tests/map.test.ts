import { describe, expect, it } from "vitest";

import { latToWorldY, lonToWorldX, worldXToLon, worldYToLat } from "../src/map.js";

describe("web mercator projection", () => {
  it("round-trips coordinates through world pixels", () => {
    for (const [lat, lon] of [[44.409, 26.103], [0, 0], [-33.86, 151.2], [59.33, 18.07]]) {
      for (const zoom of [3, 10, 15]) {
        const x = lonToWorldX(lon, zoom);
        const y = latToWorldY(lat, zoom);
        expect(worldXToLon(x, zoom)).toBeCloseTo(lon, 6);
        expect(worldYToLat(y, zoom)).toBeCloseTo(lat, 6);
      }
    }
  });

  it("places the origin at the antimeridian/top-left", () => {
    expect(lonToWorldX(-180, 0)).toBe(0);
    expect(lonToWorldX(180, 0)).toBe(256);
    expect(latToWorldY(0, 0)).toBeCloseTo(128, 9);
  });

  it("x grows east, y grows south", () => {
    expect(lonToWorldX(26.2, 13)).toBeGreaterThan(lonToWorldX(26.1, 13));
    expect(latToWorldY(44.3, 13)).toBeGreaterThan(latToWorldY(44.5, 13));
  });
});
